# Copyright (c) the zipchow authors. All rights reserved.
#
# This source code is licensed under the license found in the
# LICENSE file in the root directory of this source tree.

import argparse

from zipchow import utils

# Shared arguments.
common = argparse.ArgumentParser(add_help=False)
common.add_argument(
    '--verbose',
    action='store_true',
    help='Log diagnostics to stderr')
common.add_argument(
    '--json',
    action='store_true',
    help='Emit one JSON document instead of text')
common.add_argument(
    '--assert',
    dest='assert_verdict',
    action='store_true',
    help='Exit with status 1 on a negative mathematical verdict')
common.add_argument(
    '--seed',
    type=int,
    default=1,
    help='random seed')
common.add_argument(
    '--p', '--at_p', '--at-p',
    dest='p',
    type=str,
    default='symbolic',
    help="'symbolic' or a prime at which to evaluate")

parser = argparse.ArgumentParser(
    prog='zipchow',
    description='Exact Chow ring computations for stacks of G-zips')
subparsers = parser.add_subparsers(dest='command', required=True)

# Expansion arguments.
expand = subparsers.add_parser(
    'expand',
    parents=[common],
    help='Expand a monomial class of A1^d in the strata basis')
expand.add_argument(
    '--d',
    type=int,
    required=True,
    help='modulus d of the restriction of scalars')
expand.add_argument(
    '--set',
    type=str,
    default='',
    help='comma-separated members of I in 0..d-1')
expand.add_argument(
    '--oracle',
    action='store_true',
    help='Invert the strata matrix instead of using the closed form')
expand.add_argument(
    '--hodge_power',
    type=int,
    default=None,
    help='Expand (l_0 + ... + l_{d-1})^m instead of a monomial')
expand.add_argument(
    '--partition',
    type=str,
    default=None,
    help='Block sizes summing to d; expands in the product of the blocks')

# Certification arguments.
certify = subparsers.add_parser(
    'certify',
    parents=[common],
    help='Check one identity or criterion')
certify.add_argument(
    'identity',
    choices=['reciprocity', 'orthogonality', 'interval', 'codim1', 'kunneth', 'griffiths',
             'proportionality', 'hodge_nonnef', 'curve', 'dual_cone', 'hasse_power'],
    help='which identity to check')
certify.add_argument(
    '--d',
    type=int,
    default=None,
    help='modulus d, or the rank n for proportionality')
certify.add_argument(
    '--set',
    type=str,
    default='',
    help='the subset I')
certify.add_argument(
    '--other',
    type=str,
    default='',
    help='the second subset J')
certify.add_argument(
    '--index',
    type=int,
    default=None,
    help='index i, the interval start a, or the degree r')
certify.add_argument(
    '--end',
    type=int,
    default=None,
    help='interval end b')
certify.add_argument(
    '--sign',
    choices=['cardinality', 'modulus'],
    default='cardinality',
    help='sign convention of the denominator')
certify.add_argument(
    '--partition',
    type=str,
    default=None,
    help='block sizes for kunneth and griffiths')
certify.add_argument(
    '--m',
    type=int,
    default=1,
    help='power for griffiths and hasse_power')
certify.add_argument(
    '--type',
    type=str,
    default='C2',
    help='C2, A2u, A2 or A1^d for curve, dual_cone and hasse_power')
certify.add_argument(
    '--curve',
    type=str,
    default='',
    help='curve coefficients in the basis of the flag ring')
certify.add_argument(
    '--lambda',
    dest='lam',
    type=str,
    default=None,
    help='degree one class for hasse_power')
certify.add_argument(
    '--nef',
    action='store_true',
    help='Add the Hodge inequality to the dual cone')

# Cone arguments.
cone = subparsers.add_parser(
    'cone',
    parents=[common],
    help='Partial Hasse cone membership')
cone.add_argument(
    '--type',
    type=str,
    default='A1^3',
    help='Cartan type such as C2, A2u or A1^3')
cone.add_argument(
    '--w',
    type=str,
    default='w0',
    help="Weyl element as 1-based word '1,2,1' or 'w0'")
cone.add_argument(
    '--lambda',
    dest='lam',
    type=str,
    default=None,
    help='comma-separated character coordinates')
cone.add_argument(
    '--levi',
    type=str,
    default='',
    help='1-based simple roots of the Levi')
cone.add_argument(
    '--z',
    type=str,
    default=None,
    help='twist element; defaults to the frame of the Levi')
cone.add_argument(
    '--convention',
    choices=['automorphic', 'lattice'],
    default='automorphic',
    help='sign convention of the weight')
cone.add_argument(
    '--frobenius',
    dest='inverse_frobenius',
    action='store_false',
    help='Twist by the Frobenius itself rather than its inverse')
cone.add_argument(
    '--hilbert_inert', '--hilbert-inert',
    dest='hilbert_inert',
    action='store_true',
    help='Use the inert Hilbert threefold criterion')
cone.add_argument(
    '--k',
    type=str,
    default=None,
    help='weights k0,k1,k2 for the inert Hilbert threefold')
cone.add_argument(
    '--divisor',
    action='store_true',
    help='Also print the Chevalley divisor of the witness')

# Classification arguments.
classify = subparsers.add_parser(
    'classify',
    parents=[common],
    help='Stratification profile and linearity')
classify.add_argument(
    '--type',
    type=str,
    default=None,
    help='Cartan type such as C2 or F4')
classify.add_argument(
    '--levi',
    type=str,
    default='',
    help='1-based simple roots of the Levi')
classify.add_argument(
    '--all',
    action='store_true',
    help='Every maximal parabolic of every supported type')

# Diagram arguments.
diagram = subparsers.add_parser(
    'diagram',
    parents=[common],
    help='Verify or draw a partial Hasse diagram')
diagram.add_argument(
    '--fixture',
    type=str,
    default='C2',
    help='C2, A2u, A2 or a path to a fixture file')
diagram.add_argument(
    '--check',
    action='store_true',
    help='Verify every edge, path and relation')
diagram.add_argument(
    '--strict',
    action='store_true',
    help='Stop at the first path mismatch')
diagram.add_argument(
    '--emit_dot', '--emit-dot',
    dest='emit_dot',
    action='store_true',
    help='Print the diagram in DOT format')

# Sweep arguments.
sweep = subparsers.add_parser(
    'sweep',
    parents=[common],
    help='Run invariant sweeps and summarize')
sweep.add_argument(
    '--invariants',
    type=str,
    default='all',
    help="comma-separated invariant names or 'all'")
sweep.add_argument(
    '--max_d',
    type=int,
    default=None,
    help='largest modulus for every invariant; by default each uses its own bound, capped by ZIPCHOW_MAX_D')
sweep.add_argument(
    '--primes',
    type=utils.parse_int_list,
    default=[2, 3, 5, 7],
    help='primes for numeric checks')
sweep.add_argument(
    '--samples',
    type=int,
    default=200,
    help='random cases for sampled invariants')
sweep.add_argument(
    '--num_processes',
    type=int,
    default=1,
    help='how many worker processes to use')
sweep.add_argument(
    '--log_dir',
    type=str,
    default=None,
    help='directory for sweep logs; nothing is written when unset')
sweep.add_argument(
    '--xpid',
    type=str,
    default=None,
    help='run name under the log directory')
sweep.add_argument(
    '--no_progress',
    action='store_true',
    help='Hide progress bars')
