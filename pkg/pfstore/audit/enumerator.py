''' Exhaustive enumeration of a storage strategy at tiny scale

    Every file, tape and key assignment is pushed through the strategy's own
    multi_user_store and server_ingest. With several users the whole joint
    input space is visited, so the state count is the product over users.
'''
import itertools
from collections import Counter

import numpy as np

from pfstore.audit.distribution import JointDistribution, ProductDistribution
from pfstore.sharing.ramp import RandomTape
from pfstore.storage.dealer import KeyRing
from pfstore.storage.protocol import FileRecord
from pfstore.storage.registration import load
from pfstore.utils.logger import log
from pfstore.utils.pfstore_error import ScaleError, AuditFailure

MAX_ATOMS = 1 << 24


def resolve_strategy(strategy):
    return load(strategy) if isinstance(strategy, str) else strategy


def user_labels(params, user_id):
    ''' F, R, then K, M and S for servers 1..L
    '''
    labels = [('F', user_id), ('R', user_id)]
    for kind in ('K', 'M', 'S'):
        labels += [(kind, user_id, l) for l in params.server_ids]
    return labels


def _user_variables(params, strategy, user_id):
    user = params.user(user_id)
    return (params.capacity_symbols(user_id), strategy.tape_length(params, user_id),
            params.L * user.n_symbols)


def state_count(params, strategy='ramp-otp'):
    ''' Number of input atoms the full joint enumeration would visit
    '''
    strategy = resolve_strategy(strategy)
    count = 1
    for user_id in params.user_ids:
        count *= params.spec.order ** sum(_user_variables(params, strategy, user_id))
    return count


def _split_atom(params, strategy, user_id, atom):
    n_s, n_r, _ = _user_variables(params, strategy, user_id)
    n = params.user(user_id).n_symbols
    keys = atom[n_s + n_r:]
    return (atom[:n_s], atom[n_s:n_s + n_r],
            {l: keys[(l - 1) * n:l * n] for l in params.server_ids})


def _reference_inputs(params, strategy, user_id, value):
    n_s, n_r, n_k = _user_variables(params, strategy, user_id)
    return _split_atom(params, strategy, user_id, (value,) * (n_s + n_r + n_k))


def run_once(params, strategy, inputs):
    ''' Run every user's pipeline on fixed inputs

    Args:
        inputs (dict): user id -> (file symbols, tape symbols, {server: key symbols})

    Returns:
        (tuple): user id -> ({server: message}, {server: share}) as symbol tuples,
            and the ResourceReport of the run
    '''
    spec = params.spec
    files, rings, tapes = [], {}, {}
    for user_id, (f, r, keys) in inputs.items():
        files.append(FileRecord.from_symbols(user_id, np.array(f, dtype=np.uint8), spec))
        rings[user_id] = KeyRing(user_id, {l: np.array(k, dtype=np.uint8) for l, k in keys.items()}, spec)
        tapes[user_id] = RandomTape(np.array(r, dtype=np.uint8))
    grouped, report = strategy.multi_user_store(files, rings, params, tapes)

    outputs = {user_id: ({}, {}) for user_id in inputs}
    for server_id, messages in grouped.items():
        for msg in messages:
            key = rings[msg.user_id].entries[server_id]
            share = strategy.server_ingest(msg, key)
            outputs[msg.user_id][0][server_id] = tuple(msg.payload.tolist())
            outputs[msg.user_id][1][server_id] = tuple(share.payload.tolist())
    return outputs, report


def _outcome(params, strategy, user_id, atom, outputs):
    f, r, keys = _split_atom(params, strategy, user_id, atom)
    messages, shares = outputs
    return ((f, r) + tuple(keys[l] for l in params.server_ids)
            + tuple(messages[l] for l in params.server_ids)
            + tuple(shares[l] for l in params.server_ids))


def _user_atoms(params, strategy, user_id):
    width = sum(_user_variables(params, strategy, user_id))
    return itertools.product(range(params.spec.order), repeat=width), params.spec.order ** width


def _factor(params, strategy, user_id, outputs, expected):
    ''' Per-user law from the outputs recorded for each of the user's own atoms
    '''
    weights = Counter(_outcome(params, strategy, user_id, atom, out) for atom, out in outputs.items())
    if len(outputs) != expected or len(weights) != expected:
        raise AuditFailure('Enumeration of user {} visited {} atoms with {} outcomes, expected {}'.format(
            user_id, len(outputs), len(weights), expected))
    return JointDistribution(user_labels(params, user_id), weights)


def _enumerate_users(params, strategy):
    ''' Push every joint atom of every user through one run

    A user's outputs must be the same for every input of the other users,
    which makes the joint law the product of the per-user factors.
    '''
    user_ids = list(params.user_ids)
    spaces = [_user_atoms(params, strategy, user_id) for user_id in user_ids]
    outputs = {user_id: {} for user_id in user_ids}
    for joint in itertools.product(*[atoms for atoms, _ in spaces]):
        inputs = {user_id: _split_atom(params, strategy, user_id, atom)
                  for user_id, atom in zip(user_ids, joint)}
        results = run_once(params, strategy, inputs)[0]
        for user_id, atom in zip(user_ids, joint):
            seen = outputs[user_id].setdefault(atom, results[user_id])
            if seen != results[user_id]:
                others = [d for d in user_ids if d != user_id]
                raise AuditFailure('Outputs of user {} depend on the inputs of users {}'.format(
                    user_id, others))
    return [_factor(params, strategy, user_id, outputs[user_id], expected)
            for user_id, (_, expected) in zip(user_ids, spaces)]


def enumerate_strategy(params, strategy='ramp-otp', max_atoms=MAX_ATOMS):
    ''' Exact joint distribution of (F, R, K, M, S) for every user

    Args:
        params (StorageParams): tiny-scale parameters
        strategy (str or PrivateStorageProtocol): the strategy to enumerate
        max_atoms (int): guard rail on the full product state count

    Returns:
        (JointDistribution or ProductDistribution): one factor per user
    '''
    strategy = resolve_strategy(strategy)
    count = state_count(params, strategy)
    if count > max_atoms:
        raise ScaleError('Enumeration needs {} states, above the guard rail of {}'.format(
            count, max_atoms), state_count=count)
    log.info('enumerating %s over GF(%d): %d states', strategy.strategy_id, params.spec.order, count)
    factors = _enumerate_users(params, strategy)
    log.info('enumeration finished: %d factors', len(factors))
    if len(factors) == 1:
        return factors[0]
    return ProductDistribution(factors)


def sample_report(params, strategy='ramp-otp'):
    ''' ResourceReport of one run at the all-zero reference input
    '''
    strategy = resolve_strategy(strategy)
    inputs = {d: _reference_inputs(params, strategy, d, 0) for d in params.user_ids}
    return run_once(params, strategy, inputs)[1]
