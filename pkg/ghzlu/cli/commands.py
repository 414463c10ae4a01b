"""
CLI commands
"""
import logging

import click

from ghzlu.cli import (
    EXIT_INEQUIVALENT,
    EXIT_INPUT_ERROR,
    EXIT_OK,
    cli,
    exit_code_for,
)
from ghzlu.utils.state_files import (
    dump_state_records,
    format_report_text,
    jsonable,
    report_to_json,
    save_report,
    save_state_file,
)

logger = logging.getLogger(__name__)


def _fail(ctx, result):
    """Report a failed service result and exit with its code."""
    code = exit_code_for(result.get('error_type', 'error'))
    if ctx.obj.output_json:
        click.echo(report_to_json(result))
    else:
        click.echo(f"Error: {result['message']}", err=True)
        if 'detail' in result:
            click.echo(f"  {result['detail']}", err=True)
        if 'slocc_class' in result:
            click.echo(f"  SLOCC class: {result['slocc_class']}", err=True)
    ctx.exit(code)


def _load(ctx, path):
    result = ctx.obj.service.load(path)
    if not result['success']:
        _fail(ctx, result)
    return result['records']


def _public(result):
    return {k: v for k, v in result.items() if k not in ('success', 'records')}


def _emit_records(ctx, records, out):
    if out:
        save_state_file(out, records)
        logger.info(f"{len(records)} record(s) written to {out}")
    elif ctx.obj.output_json:
        click.echo(report_to_json([r.as_dict() for r in records]))
    else:
        click.echo(dump_state_records(records), nl=False)


@cli.command()
@click.argument('input_path', type=click.Path(dir_okay=False))
@click.option('--out', type=click.Path(dir_okay=False), default=None,
              help='Write the JSON report to this file')
@click.pass_context
def classify(ctx, input_path, out):
    """Classify every state in INPUT_PATH into its LU family and subfamily."""
    reports = []
    for record in _load(ctx, input_path):
        result = ctx.obj.service.describe(record)
        if not result['success']:
            _fail(ctx, result)
        reports.append(_public(result))

    payload = reports[0] if len(reports) == 1 else reports
    if out:
        save_report(out, payload)
    elif ctx.obj.output_json:
        click.echo(report_to_json(payload))
    else:
        click.echo('\n---\n'.join(format_report_text(r) for r in reports))
    ctx.exit(EXIT_OK)


@cli.command()
@click.argument('a_path', type=click.Path(dir_okay=False))
@click.argument('b_path', type=click.Path(dir_okay=False))
@click.option('--oracle', is_flag=True, help='Also run the brute-force local-unitary search')
@click.option('--budget', type=click.IntRange(min=1), default=None,
              help='Oracle restart budget (default 64)')
@click.pass_context
def equiv(ctx, a_path, b_path, oracle, budget):
    """Decide whether the first states of two files are LU-equivalent."""
    a = _load(ctx, a_path)[0]
    b = _load(ctx, b_path)[0]
    result = ctx.obj.service.equivalence(a, b, oracle=oracle, budget=budget)
    if not result['success']:
        _fail(ctx, result)

    if ctx.obj.output_json:
        click.echo(report_to_json(_public(result)))
    else:
        verdict = 'equivalent' if result['equivalent'] else 'inequivalent'
        click.echo(f"{result['labels'][0]} vs {result['labels'][1]}: {verdict}")
        click.echo(f"reason: {result['reason']}")
        if result['witness_source']:
            click.echo(f"witness: {result['witness_source']}")
        if 'oracle' in result:
            found = result['oracle']
            click.echo(f"oracle: equivalent={found['equivalent']} "
                       f"fidelity={found['best_fidelity']:.17g} restarts={found['restarts_used']}")
    ctx.exit(EXIT_OK if result['equivalent'] else EXIT_INEQUIVALENT)


@cli.command()
@click.argument('input_path', type=click.Path(dir_okay=False))
@click.option('--out', type=click.Path(dir_okay=False), default=None,
              help='Write the transformed states to this file')
@click.pass_context
def transform(ctx, input_path, out):
    """Apply the rho-iota transformation to every state in INPUT_PATH."""
    records = []
    for record in _load(ctx, input_path):
        result = ctx.obj.service.transform(record)
        if not result['success']:
            _fail(ctx, result)
        records.extend(result['records'])
    _emit_records(ctx, records, out)
    ctx.exit(EXIT_OK)


@cli.command()
@click.argument('input_path', type=click.Path(dir_okay=False))
@click.option('--out', type=click.Path(dir_okay=False), default=None,
              help='Write the ASD records to this file')
@click.pass_context
def asd(ctx, input_path, out):
    """Compute the ASD and the witness unitaries of every state in INPUT_PATH."""
    results = []
    for record in _load(ctx, input_path):
        result = ctx.obj.service.decompose(record)
        if not result['success']:
            _fail(ctx, result)
        results.append(result)

    if out:
        save_state_file(out, [r for result in results for r in result['records']])
    elif ctx.obj.output_json:
        payload = [jsonable(_public(r)) for r in results]
        click.echo(report_to_json(payload[0] if len(payload) == 1 else payload))
    else:
        for result in results:
            click.echo(dump_state_records(result['records']), nl=False)
            click.echo(f"# slocc class: {result['slocc_class']}, lbps: {result['lbps']}")
            if 'residual' in result:
                click.echo(f"# reconstruction residual: {result['residual']:.3e}")
    ctx.exit(EXIT_OK)


@cli.command()
@click.argument('input_path', type=click.Path(dir_okay=False))
@click.pass_context
def invariants(ctx, input_path):
    """Print gamma, J1, J4, rho, iota, |ln rho| and the entanglement measure."""
    rows = []
    for record in _load(ctx, input_path):
        result = ctx.obj.service.invariant_summary(record)
        if not result['success']:
            _fail(ctx, result)
        rows.append(_public(result))
    if ctx.obj.output_json:
        click.echo(report_to_json(rows[0] if len(rows) == 1 else rows))
    else:
        click.echo('\n---\n'.join(format_report_text(r) for r in rows))
    ctx.exit(EXIT_OK)


@cli.command()
@click.option('--family', 'label', required=True, help="Subfamily label such as P1' or C4''")
@click.option('--count', type=click.IntRange(min=1), default=1, show_default=True)
@click.option('--seed', type=int, default=None, help='Overrides the global seed')
@click.option('--out', type=click.Path(dir_okay=False), default=None)
@click.pass_context
def sample(ctx, label, count, seed, out):
    """Generate deterministic random states of one subfamily."""
    result = ctx.obj.service.sample(label, count, seed)
    if not result['success']:
        _fail(ctx, result)
    _emit_records(ctx, result['records'], out)
    ctx.exit(EXIT_OK)


@cli.command()
@click.option('--quick', 'mode', flag_value='quick', default=True, help='Reduced sample sizes')
@click.option('--full', 'mode', flag_value='full', help='Full acceptance sample sizes')
@click.pass_context
def selftest(ctx, mode):
    """Run the acceptance suite and report every criterion."""
    result = ctx.obj.service.selftest(mode)
    if 'results' not in result:
        _fail(ctx, result)

    if ctx.obj.output_json:
        click.echo(report_to_json(result))
    else:
        for row in result['results']:
            status = 'PASS' if row['passed'] else 'FAIL'
            click.echo(f"{status} {row['name']} ({row['elapsed']:.2f}s): {row['detail']}")
        click.echo(f"{mode}: {'passed' if result['passed'] else 'FAILED'}")
    ctx.exit(EXIT_OK if result['passed'] else EXIT_INPUT_ERROR)
