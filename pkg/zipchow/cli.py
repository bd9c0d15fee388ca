# Copyright (c) the zipchow authors. All rights reserved.
#
# This source code is licensed under the license found in the
# LICENSE file in the root directory of this source tree.

import json
import logging
import sys
from typing import Dict, List, Optional, Tuple

import pandas as pd

from zipchow import azip, chevalley, ring, strata, sweep, utils, weyl
from zipchow.arguments import parser
from zipchow.azip import CyclicSubset
from zipchow.file_writer import FileWriter
from zipchow.scalars import format_scalar, is_positive, parse_p, parse_scalar

SCHEMA = 'zipchow/1'

EXIT_OK = 0
EXIT_VERDICT = 1
EXIT_USAGE = 2
EXIT_FAILURE = 3

# Result of a command: the JSON document, its text rendering, and the verdict.
Outcome = Tuple[Dict[str, object], str, bool]


def _p_text(p0: Optional[int]):
    return 'symbolic' if p0 is None else p0


def _expansion_doc(expansion: azip.StrataExpansion) -> Dict[str, object]:
    doc = expansion.to_json()
    doc['text'] = expansion.to_text()
    return doc


def _parse_partition(text: Optional[str], d: Optional[int] = None) -> List[int]:
    if not text:
        raise ValueError('--partition is required')
    partition = utils.parse_int_list(text)
    if any(part < 1 for part in partition):
        raise ValueError(f'Partition parts must be positive, got {partition}')
    if d is not None and sum(partition) != d:
        raise ValueError(f'Partition {partition} does not sum to d={d}')
    return partition


def _require_d(args) -> int:
    if args.d is None:
        raise ValueError('--d is required')
    return azip.check_modulus(args.d)


# Commands.

def run_expand(args) -> Outcome:
    p0 = parse_p(args.p)
    d = azip.check_modulus(args.d)
    if args.hodge_power is not None:
        expansion = azip.hodge_power_expansion(d, args.hodge_power, p0)
        source = f'(l_0+...+l_{d - 1})^{args.hodge_power}'
    else:
        I = CyclicSubset.parse(d, args.set)
        source = str(I)
        if args.partition:
            expansion = azip.kunneth_expand(_parse_partition(args.partition, d), I, p0)
        elif args.oracle:
            expansion = azip.expand_oracle(I, p0)
        else:
            expansion = azip.expand_closed_form(I, p0)
    doc = dict(expansion.to_json(), d=d, I=source, p=_p_text(p0))
    text = f'{source} = {expansion.to_text()}\neffective: {expansion.effective}'
    return doc, text, expansion.effective


def _certify_pair(args) -> Tuple[CyclicSubset, CyclicSubset]:
    d = _require_d(args)
    return CyclicSubset.parse(d, args.set), CyclicSubset.parse(d, args.other)


def run_certify(args) -> Outcome:
    identity = args.identity
    p0 = parse_p(args.p)
    doc: Dict[str, object] = {'identity': identity}
    if identity == 'reciprocity':
        I, J = _certify_pair(args)
        lhs, rhs = azip.reciprocity_sides(I, J, args.sign)
        holds = lhs == rhs
        doc.update(azip.reciprocity_record(I, J), lhs=format_scalar(lhs), rhs=format_scalar(rhs))
    elif identity == 'orthogonality':
        I, J = _certify_pair(args)
        holds = azip.orthogonality_check(I, J)
        doc.update(I=str(I), J=str(J))
    elif identity == 'interval':
        d = _require_d(args)
        if args.index is None or args.end is None:
            raise ValueError('interval needs --index a and --end b')
        holds = azip.interval_P_check(d, args.index, args.end)
        doc.update(d=d, a=args.index, b=args.end)
    elif identity == 'codim1':
        d = _require_d(args)
        i = args.index or 0
        expansion = azip.codim_one_expansion(d, i, args.sign)
        holds = azip.verify_expansion(expansion)
        doc.update(d=d, i=i, sign=args.sign, expansion=_expansion_doc(expansion))
    elif identity == 'kunneth':
        d = _require_d(args)
        partition = _parse_partition(args.partition, d)
        I = CyclicSubset.parse(d, args.set)
        holds = azip.verify_kunneth(partition, I)
        doc.update(partition=partition, I=str(I),
                   expansion=_expansion_doc(azip.kunneth_expand(partition, I, p0)))
    elif identity == 'griffiths':
        partition = _parse_partition(args.partition, args.d)
        azip.check_modulus(sum(partition))
        holds = azip.griffiths_direct_sum_effective(partition, args.m, p0)
        doc.update(partition=partition, m=args.m)
    elif identity == 'proportionality':
        if args.d is None:
            raise ValueError('proportionality needs the rank as --d')
        holds = strata.proportionality_typeA(args.d, args.index)
        doc.update(n=args.d, r=args.index)
    elif identity == 'hodge_nonnef':
        negative, positive = strata.hodge_nonnef_C2(p0)
        holds = is_positive(-negative, p0) and is_positive(positive, p0)
        doc.update(neg_degree=format_scalar(negative), pos_degree=format_scalar(positive))
    elif identity == 'curve':
        name = args.type
        criteria = strata.criteria_for(name)
        verdict = strata.curve_verdict(criteria, [parse_scalar(x) for x in args.curve.split(',')], p0)
        holds = verdict.strata_effective
        doc.update(verdict.to_json(), implication_holds=verdict.implication_holds)
    elif identity == 'dual_cone':
        if p0 is None:
            raise ValueError('dual_cone needs a prime --p')
        criteria = strata.criteria_for(args.type)
        verdict = strata.dual_cone_check(criteria, p0, args.nef)
        holds = verdict.holds
        doc.update(type=args.type, nef=args.nef, status='strata-effective' if holds else 'indeterminate',
                   violated=verdict.violated,
                   witness=None if verdict.witness is None else [str(x) for x in verdict.witness])
    elif identity == 'hasse_power':
        table = strata.strata_table(args.type, p0)
        if args.lam is None:
            raise ValueError('hasse_power needs --lambda')
        lam = ring.reduce(table.presentation, args.lam)
        try:
            expansion = strata.hasse_generator_power(table, lam, args.m)
        except strata.NotAPartialHasseGenerator as exc:
            doc.update(type=args.type, m=args.m, error=str(exc))
            holds = False
        else:
            holds = expansion.effective
            doc.update(type=args.type, m=args.m, expansion=_expansion_doc(expansion))
    else:
        raise ValueError(f'Unsupported identity, {identity}')
    doc.update(holds=holds, p=_p_text(p0))
    return doc, f'{identity}: {"holds" if holds else "fails"}', holds


def run_cone(args) -> Outcome:
    p0 = parse_p(args.p)
    if args.hilbert_inert:
        if not args.k:
            raise ValueError('--hilbert_inert needs --k k0,k1,k2')
        result = chevalley.hilbert_inert_cone([parse_scalar(x) for x in args.k.split(',')], p0)
        doc = {'m': chevalley.character_text(result.m), 'in_pha': result.in_pha,
               'ample': result.ample, 'p': _p_text(p0)}
        text = f'm = ({", ".join(doc["m"])})\nin_pha: {result.in_pha}\nample: {result.ample}'
        return doc, text, result.in_pha
    if args.lam is None:
        raise ValueError('--lambda is required')
    datum = weyl.root_datum(args.type)
    w = weyl.parse_element(datum, args.w)
    lam = chevalley.parse_character(datum, args.lam)
    levi = weyl.parse_subset(datum, args.levi)
    z = weyl.parse_element(datum, args.z) if args.z else None
    query = chevalley.ConeQuery(datum, w, lam, p0, z, levi, args.convention, args.inverse_frobenius)
    in_pha, chi = chevalley.pha_cone_contains(query)
    ample = chevalley.hilbert_ample(lam, p0) if args.type.startswith('A1^') else None
    doc = {'type': datum.type_label, 'w': str(w), 'in_pha': in_pha, 'ample': ample,
           'witness_chi': chevalley.character_text(chi), 'p': _p_text(p0)}
    text = f'witness chi = ({", ".join(doc["witness_chi"])})\nin_pha: {in_pha}'
    if ample is not None:
        text += f'\nample: {ample}'
    if args.divisor:
        expansion = chevalley.divisor_class_on_stratum(datum, w, chi, p0)
        doc['divisor'] = _expansion_doc(expansion)
        text += f'\ndivisor: {expansion.to_text()}'
    return doc, text, in_pha


def run_classify(args) -> Outcome:
    if args.all:
        rows = weyl.classification_table(limit=utils.max_cosets())
        frame = pd.DataFrame(rows)
        return {'rows': rows}, frame.to_string(index=False), True
    if args.type is None:
        raise ValueError('--type is required unless --all is given')
    datum = weyl.root_datum(args.type)
    subset = weyl.parse_subset(datum, args.levi)
    linear = weyl.is_linear(datum, subset)
    doc = {
        'type': datum.type_label,
        'levi': weyl.levi_label(datum, subset),
        'cosets': weyl.coset_count(datum, subset),
        'linear': linear,
        'profile': weyl.strat_type(datum, subset, limit=utils.max_cosets()),
    }
    text = f'{doc["type"]} / {doc["levi"]}: profile {doc["profile"]}, linear: {linear}'
    return doc, text, linear


def run_diagram(args) -> Outcome:
    fixture = strata.load_fixture(args.fixture)
    doc: Dict[str, object] = {'fixture': fixture.name}
    texts = []
    ok = True
    if args.emit_dot:
        dot = strata.emit_dot(fixture)
        doc['dot'] = dot
        texts.append(dot.rstrip('\n'))
    if args.check or not args.emit_dot:
        try:
            report = strata.verify_diagram(fixture, strict=args.strict)
        except strata.PathMismatch as exc:
            doc.update(ok=False, error=str(exc))
            return doc, str(exc), False
        ok = report.ok
        doc.update(ok=ok, checks=report.checks)
        texts.append(f'{fixture.name}: {len(report.checks)} checks, {len(report.failures())} failed')
        texts.extend(f'  {c["kind"]} {c["subject"]} {c["detail"]}' for c in report.failures())
    return doc, '\n'.join(texts), ok


def run_sweep(args) -> Outcome:
    names = sweep.resolve_invariants(args.invariants)
    max_d = None if args.max_d is None else min(args.max_d, utils.max_d())
    config = sweep.SweepConfig(max_d=max_d, primes=tuple(args.primes), samples=args.samples, seed=args.seed)
    writer = None
    if args.log_dir:
        writer = FileWriter(xpid=args.xpid, xp_args=dict(vars(args)), rootdir=args.log_dir)
    timings = utils.Timings()
    results = sweep.run_sweep(names, config, args.num_processes, progress=not args.no_progress,
                              timings=timings)
    logging.info(timings.summary('Sweep timings:'))
    summary = sweep.summarize(results)
    ok = int(summary['failed'].sum()) == 0
    if writer is not None:
        for row in summary.to_dict('records'):
            writer.log(row)
        writer.log_cases(results)
        writer.close(successful=ok)
    failures = [r for r in results if not r['ok']]
    doc = {'ok': ok, 'max_d': max_d, 'primes': list(config.primes),
           'invariants': summary.to_dict('records'), 'failures': failures}
    return doc, summary.to_string(index=False), ok


COMMANDS = {
    'expand': run_expand,
    'certify': run_certify,
    'cone': run_cone,
    'classify': run_classify,
    'diagram': run_diagram,
    'sweep': run_sweep,
}


def run(args, stdout=None) -> int:
    stdout = stdout or sys.stdout
    try:
        doc, text, verdict = COMMANDS[args.command](args)
    except (ValueError, KeyError) as exc:
        message = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f'zipchow {args.command}: {message}', file=sys.stderr)
        return EXIT_USAGE
    except (ArithmeticError, RuntimeError) as exc:
        # The input was valid but the computation could not finish.
        print(f'zipchow {args.command}: {type(exc).__name__}: {exc}', file=sys.stderr)
        return EXIT_FAILURE
    if args.json:
        doc = dict(doc, schema=SCHEMA, command=args.command)
        stdout.write(json.dumps(doc, sort_keys=True, indent=2, default=str) + '\n')
    else:
        stdout.write(text + '\n')
    if args.command == 'sweep' and not verdict:
        return EXIT_VERDICT
    if args.assert_verdict and not verdict:
        return EXIT_VERDICT
    return EXIT_OK


def main(argv=None) -> int:
    args = parser.parse_args(argv)

    if args.verbose:
        logging.basicConfig(stream=sys.stderr, format="%(levelname)s:%(name)s: %(message)s")
        logging.getLogger().setLevel(logging.INFO)
    else:
        logging.disable(logging.CRITICAL)

    utils.seed(args.seed)
    return run(args)


if __name__ == '__main__':
    sys.exit(main())
