"""
Entry point for ``python -m ghzlu``
"""
from dotenv import load_dotenv

load_dotenv()

from ghzlu.cli import cli  # noqa: E402

cli(prog_name='ghzlu')
