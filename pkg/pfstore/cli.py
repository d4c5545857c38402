''' Command line entry point: pfstore keygen | store | ingest | reconstruct | audit | bounds | demo

    Key files are never modified. A key used for a store gets a sidecar
    marker <key file>.used, and a marked key is refused.
'''
import hashlib
import json
import logging
import os

import click

from pfstore.audit.judger import audit as run_audit
from pfstore.bounds.optima import compute_optima, verify_achievement, capacity_frontier
from pfstore.envs.scenario import load_scenario, run_scenario
from pfstore.fields import get_field
from pfstore.storage.dealer import KeyRing, keygen
from pfstore.storage.protocol import FileRecord, StorageParams, UserParams
from pfstore.storage.records import (KeyRecord, decode_key_record, message_from_bytes,
                                     share_from_bytes)
from pfstore.storage.registration import load, strategy_registry
from pfstore.utils.logger import AuditLogger, log
from pfstore.utils.utils import format_bits, verdict_text
from pfstore.utils.pfstore_error import (PFStoreError, AuditFailure, KeyNotFoundError,
                                         KeyReuseError, ProtocolError, FormatError, UsageError)

IO_EXIT_CODE = 6


class PFStoreGroup(click.Group):
    ''' Maps package errors to their exit codes
    '''

    def invoke(self, ctx):
        try:
            return super().invoke(ctx)
        except PFStoreError as e:
            click.echo('Error: {}'.format(e), err=True)
            ctx.exit(e.exit_code)
        except OSError as e:
            click.echo('Error: {}'.format(e), err=True)
            ctx.exit(IO_EXIT_CODE)


class IntSweep(click.ParamType):
    ''' "3", "2..5" or "1,2,4" '''
    name = 'sweep'

    def convert(self, value, param, ctx):
        if isinstance(value, list):
            return value
        try:
            if '..' in value:
                low, high = value.split('..')
                return list(range(int(low), int(high) + 1))
            return [int(part) for part in value.split(',')]
        except ValueError:
            self.fail('{!r} is not an integer, a range a..b or a list a,b,c'.format(value), param, ctx)


def key_path(directory, user_id, server_id):
    return os.path.join(directory, 'key_u{}_s{}.pfk'.format(user_id, server_id))


def message_path(directory, user_id, server_id):
    return os.path.join(directory, 'msg_u{}_s{}.pfm'.format(user_id, server_id))


def _read(path):
    with open(path, 'rb') as f:
        return f.read()


def _write(path, data):
    with open(path, 'wb') as f:
        f.write(data)


def _emit_json(document, out):
    text = json.dumps(document, indent=2, sort_keys=True)
    if out:
        with open(out, 'w') as f:
            f.write(text + '\n')
        click.echo('Report written to {}'.format(out))
    else:
        click.echo(text)


def _load_ring(directory, user_id, L):
    ''' Read the user's key files for servers 1..L, refusing marked ones
    '''
    entries, spec = {}, None
    for l in range(1, L + 1):
        path = key_path(directory, user_id, l)
        if not os.path.exists(path):
            raise KeyNotFoundError('Missing key file {} (run keygen for user {} first)'.format(path, user_id))
        if os.path.exists(path + '.used'):
            raise KeyReuseError('Key file {} was already used (marker {}.used exists)'.format(path, path))
        data = _read(path)
        try:
            record, end = decode_key_record(data)
        except FormatError as e:
            raise FormatError('{} in {}'.format(e, path)) from e
        if end != len(data):
            raise FormatError('Trailing bytes after the key record in {}'.format(path), offset=end)
        if (record.user_id, record.server_id) != (user_id, l):
            raise ProtocolError('{} holds the key of user {} for server {}'.format(
                path, record.user_id, record.server_id))
        if spec is not None and record.m != spec.m:
            raise ProtocolError('{} is over GF(2^{}), other keys over GF(2^{})'.format(path, record.m, spec.m))
        spec = get_field(record.m)
        entries[l] = record.material
    return KeyRing(user_id, entries, spec)


@click.group(cls=PFStoreGroup)
@click.option('--verbose', '-v', is_flag=True, help='Log parameter details.')
def cli(verbose):
    ''' Private file storage over L servers with one-time pads and ramp sharing. '''
    if verbose:
        log.setLevel(logging.DEBUG)


@cli.command('keygen')
@click.option('--servers', '-L', 'L', type=int, required=True, help='Number of servers L.')
@click.option('--n', 'n', type=int, required=True, help='Key length per server, in symbols.')
@click.option('--user', 'user_id', type=int, default=1, show_default=True, help='User id.')
@click.option('--m', 'm', type=int, default=8, show_default=True, help='Symbol width of GF(2^m).')
@click.option('--seed', type=int, default=None, help='Derive the keys from a seed instead of system entropy.')
@click.option('--epoch', type=int, default=0, show_default=True, help='Key generation counter.')
@click.option('--out', 'out_dir', type=click.Path(file_okay=False), default='.', show_default=True)
def keygen_command(L, n, user_id, m, seed, epoch, out_dir):
    ''' Write one key file per server for a user. '''
    spec = get_field(m)
    ring = keygen(user_id, L, n, spec, seed=seed, epoch=epoch)
    os.makedirs(out_dir, exist_ok=True)
    for l in ring.server_ids:
        path = key_path(out_dir, user_id, l)
        _write(path, KeyRecord(user_id, l, m, ring.distribute(l)).to_bytes())
        click.echo(path)


@cli.command('store')
@click.argument('file', type=click.Path(exists=True, dir_okay=False))
@click.option('--keys', 'keys_dir', type=click.Path(file_okay=False), required=True, help='Directory of key files.')
@click.option('--servers', '-L', 'L', type=int, required=True, help='Number of servers L.')
@click.option('--t', 't', type=int, required=True, help='Recovery threshold.')
@click.option('--z', 'z', type=int, required=True, help='Collusion threshold.')
@click.option('--user', 'user_id', type=int, default=1, show_default=True)
@click.option('--seed', type=int, default=None, help='Derive the randomness tape from a seed.')
@click.option('--out', 'out_dir', type=click.Path(file_okay=False), required=True, help='Directory for message files.')
@click.option('--report', 'report_path', type=click.Path(dir_okay=False), default=None,
              help='Write the JSON resource report here instead of stdout.')
def store_command(file, keys_dir, L, t, z, user_id, seed, out_dir, report_path):
    ''' Encode FILE into one public message per server. '''
    ring = _load_ring(keys_dir, user_id, L)
    params = StorageParams([UserParams(user_id, t, z, ring.n_symbols)], L, ring.spec)
    record = FileRecord(user_id, _read(file))
    strategy = load('ramp-otp')
    tape = strategy.draw_tape(params, user_id, seed=seed)
    messages, report = strategy.store(record, ring, params, tape)

    os.makedirs(out_dir, exist_ok=True)
    for msg in messages:
        _write(message_path(out_dir, user_id, msg.server_id), msg.to_bytes())
    for l in ring.server_ids:
        _write(key_path(keys_dir, user_id, l) + '.used', b'')

    verdicts = verify_achievement(report, compute_optima(params))
    pad_count = messages[0].header.pad_count
    if pad_count:
        click.echo('File of {} bits padded with {} symbols to n(t-z) = {} symbols'.format(
            record.bit_length, pad_count, params.capacity_symbols(user_id)), err=True)
    _emit_json({
        'parameters': params.to_dict(),
        'measured': report.to_dict(),
        'optimal': compute_optima(params).to_dict(),
        'verdicts': [v.to_dict() for v in verdicts],
        'pad_count': pad_count,
        'messages': [message_path(out_dir, user_id, msg.server_id) for msg in messages],
    }, report_path)


@cli.command('ingest')
@click.argument('message', type=click.Path(exists=True, dir_okay=False))
@click.option('--key', 'key_file', type=click.Path(exists=True, dir_okay=False), required=True)
@click.option('--out', 'out_path', type=click.Path(dir_okay=False), required=True)
def ingest_command(message, key_file, out_path):
    ''' Server side: turn a public MESSAGE into the stored share. '''
    msg, _ = message_from_bytes(_read(message))
    key, _ = decode_key_record(_read(key_file))
    if (key.user_id, key.server_id, key.m) != (msg.user_id, msg.server_id, msg.header.m):
        raise ProtocolError('Key of user {} for server {} cannot ingest a message of user {} for server {}'.format(
            key.user_id, key.server_id, msg.user_id, msg.server_id))
    share = load('ramp-otp').server_ingest(msg, key.material)
    _write(out_path, share.to_bytes())
    click.echo(out_path)


@cli.command('reconstruct')
@click.argument('shares', nargs=-1, type=click.Path(exists=True, dir_okay=False))
@click.option('--out', 'out_path', type=click.Path(dir_okay=False), required=True)
def reconstruct_command(shares, out_path):
    ''' Decode the original file from at least t SHARES. '''
    if not shares:
        raise UsageError('Give at least one share file')
    records = [share_from_bytes(_read(path))[0] for path in shares]
    header = records[0].header
    params = StorageParams([UserParams(header.user_id, header.t, header.z, header.n_symbols)],
                           header.L, get_field(header.m))
    record = load('ramp-otp').reconstruct(records, params)
    _write(out_path, record.data)
    click.echo('{}  {}'.format(hashlib.sha256(record.data).hexdigest(), out_path))


def _audit_table(report):
    lines = []
    for user_id in report.params.user_ids:
        lines.append('user {}: H(F) = {} bits'.format(user_id, format_bits(report.file_entropy[user_id])))
        lines.append('  {:<16} {:>12} {:>12}  {}'.format('servers', 'I(F;M,K_U)', 'alpha', 'security'))
        verdicts = report.security_verdicts[user_id]
        for subset, leakage in report.security[user_id].items():
            mark = verdict_text(verdicts[subset]) if subset in verdicts else ''
            lines.append('  {:<16} {:>12} {:>12}  {}'.format(
                str(list(subset)), format_bits(leakage), format_bits(report.alpha[user_id][subset]), mark))
    lines.append('symmetry: {}'.format(verdict_text(report.symmetry.ok)))
    for check in report.checks:
        if not check.ok:
            lines.append('{}: {} {}'.format(check.name, verdict_text(False), check.detail))
    lines.append('audit of {}: {}'.format(report.strategy_id, verdict_text(report.passed)))
    return '\n'.join(lines)


@cli.command('audit')
@click.option('--m', 'm', type=int, default=2, show_default=True, help='Symbol width of GF(2^m).')
@click.option('--L', 'L', type=int, default=3, show_default=True, help='Number of servers.')
@click.option('--t', 't', type=int, default=2, show_default=True)
@click.option('--z', 'z', type=int, default=1, show_default=True)
@click.option('--n', 'n', type=int, default=1, show_default=True, help='Key length in symbols.')
@click.option('--add-user', 'extra_users', type=(int, int, int), multiple=True, metavar='T Z N',
              help='A further user with its own thresholds and key length; repeatable.')
@click.option('--break', 'strategy_id', type=click.Choice(strategy_registry.strategy_ids),
              default='ramp-otp', show_default=True, help='Audit a deliberately broken strategy.')
@click.option('--out', 'out_path', type=click.Path(dir_okay=False), default=None, help='Write the JSON report here.')
@click.option('--json', 'as_json', is_flag=True, help='Print the JSON report instead of the table.')
@click.option('--log-dir', type=click.Path(file_okay=False), default=None, help='Also write log.txt and leakage.csv.')
def audit_command(m, L, t, z, n, extra_users, strategy_id, out_path, as_json, log_dir):
    ''' Exhaustively enumerate a tiny configuration and check every leakage verdict. '''
    users = [UserParams(1, t, z, n)]
    users += [UserParams(i + 2, *extra) for i, extra in enumerate(extra_users)]
    params = StorageParams(users, L, get_field(m))
    report = run_audit(params, strategy_id)
    document = report.to_dict()

    if log_dir:
        with AuditLogger(log_dir) as logger:
            logger.log('audit of {} over GF({}), L={}'.format(strategy_id, params.spec.order, L))
            for user_id in params.user_ids:
                for subset, leakage in report.security[user_id].items():
                    logger.log_leakage(user_id, subset, leakage, report.alpha[user_id][subset])
            logger.log('passed: {}'.format(report.passed))
    if out_path:
        _emit_json(document, out_path)
    if as_json:
        _emit_json(document, None)
    else:
        click.echo(_audit_table(report))
    if not report.passed:
        raise AuditFailure('{} verdict(s) failed: {}'.format(len(report.failures()), ', '.join(report.failures())))


@cli.command('bounds')
@click.option('--n', 'n', type=IntSweep(), required=True, help='Key bits per server, e.g. 8 or 8..64.')
@click.option('--L', 'L', type=int, required=True, help='Number of servers.')
@click.option('--t', 't', type=IntSweep(), required=True, help='Recovery thresholds, e.g. 3 or 2..5.')
@click.option('--z', 'z', type=IntSweep(), required=True, help='Collusion thresholds, e.g. 1 or 1,2.')
@click.option('--json', 'as_json', is_flag=True, help='Print JSON rows.')
def bounds_command(n, L, t, z, as_json):
    ''' Optimal file size, randomness, messages and storage for the given thresholds. '''
    rows = capacity_frontier(n, L, t, z)
    if as_json:
        _emit_json([row.__dict__ for row in rows], None)
        return
    header = ('n', 't', 'z', 'file', 'randomness', 'message', 'message_sum', 'storage')
    click.echo(' '.join('{:>11}'.format(h) for h in header))
    for row in rows:
        click.echo(' '.join('{:>11}'.format(v) for v in (row.n_bits, row.t, row.z) + row.as_tuple()))


@cli.command('demo')
@click.argument('scenario', type=click.Path(exists=True, dir_okay=False))
@click.option('--persist', 'persist_dir', type=click.Path(file_okay=False), default=None,
              help='Write the final server states here.')
def demo_command(scenario, persist_dir):
    ''' Run a JSON SCENARIO on the simulated network. '''
    result = run_scenario(load_scenario(scenario))
    env = result['env']
    click.echo('transcript: {} public messages'.format(len(result['transcript'])))
    for l, bits in result['storage_bits'].items():
        click.echo('server {}: {} bits stored'.format(l, bits))
    verdicts = verify_achievement(result['report'], compute_optima(env.params))
    click.echo('resources optimal: {}'.format(verdict_text(all(v.ok for v in verdicts))))
    for attack in result['attacks']:
        line = 'servers {} against user {}:'.format(list(attack.colluders), attack.user_id)
        if attack.recovered is not None:
            line += ' recovered={}'.format(attack.recovered)
        if attack.exact:
            line += ' H(F|view) = {} of {} bits'.format(format_bits(attack.residual_entropy),
                                                       format_bits(attack.file_entropy))
        else:
            line += ' {} keys, {} shares seen'.format(attack.keys_seen, attack.shares_seen)
        click.echo(line)
    if persist_dir:
        env.persist(persist_dir)
        click.echo('server states written to {}'.format(persist_dir))


def main():
    cli(prog_name='pfstore')


if __name__ == '__main__':
    main()
