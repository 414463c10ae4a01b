"""
GHZ-class LU toolkit - Main Entry Point
"""
from dotenv import load_dotenv

# Load environment variables from .env file
load_dotenv()

from ghzlu.cli import cli  # noqa: E402

if __name__ == '__main__':
    cli()
