"""Batch command line: parse instance files, dispatch, emit JSON verdicts.

Exit codes: 0 = pass/decomposed, 1 = violation/infeasible (certificate in
the output), 2 = input error.  With --verify CERTFILE a subcommand re-checks
a previously emitted result file against the instance instead of recomputing,
exiting 0 when it replays and 1 when it does not.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from typing import Any, Optional, Sequence, Tuple

from . import serialize
from .cohomology import (
    BoundedTransfer,
    ConstrainedObstruction,
    partial_sum_bound,
    solve_bounded_transfer,
)
from .core import (
    BoundTooSmallError,
    CommutingSystem,
    Decomposition,
    NotCommutingError,
    PreconditionError,
    RangeError,
    RationalFunction,
    is_invariant,
    verify_decomposition,
)
from .decomp import decompose_one, decompose_three, decompose_two
from .lattice import (
    LatticeWindow,
    lattice_decompose,
    lattice_oracle_decompose,
    mixed_delta_witness,
)
from .oracle import DualCertificate, kernel_basis, oracle_decompose
from .serialize import Instance, ParseError, dumps, load_json, parse_instance
from .star import (
    SearchReport,
    StarViolation,
    check_star,
    check_star_abelian,
    replay_abelian_violation,
    replay_violation,
    search_counterexample,
)
from .star import _reverify_candidate


def _read_instance(path: str) -> Instance:
    if path == "-":
        text = sys.stdin.read()
    else:
        try:
            with open(path, "r", encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise ParseError(f"cannot read instance file: {exc}")
    return parse_instance(load_json(text))


def _read_result(path: str) -> Any:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ParseError(f"cannot read certificate file: {exc}")
    return serialize.parse_result(load_json(text))


def _emit(doc: dict) -> None:
    sys.stdout.write(dumps(doc))


def _verify_doc(agrees: bool, reason: str = "") -> Tuple[int, dict]:
    doc: dict = {"result": "verified", "agrees": agrees}
    if reason:
        doc["reason"] = reason
    return (0 if agrees else 1), doc


# ---------------------------------------------------------------------------
# per-subcommand verification of previously emitted certificates


def _verify_decomposition_result(inst: Instance, result: Any) -> Tuple[int, dict]:
    if isinstance(result, Decomposition):
        if len(result.parts) != inst.system.n:
            return _verify_doc(False, "part count differs from transform count")
        verdict = verify_decomposition(inst.system, inst.f, result)
        return _verify_doc(verdict.ok, verdict.reason or "")
    if isinstance(result, StarViolation):
        ok = replay_violation(inst.system, inst.f, result)
        return _verify_doc(ok, "" if ok else "violation does not replay")
    return _verify_doc(False, f"unexpected result type "
                              f"{type(result).__name__} for decompose")


def _verify_star_result(inst: Instance, result: Any,
                        bound: Optional[int]) -> Tuple[int, dict]:
    if isinstance(result, StarViolation):
        if inst.kind == "finite":
            ok = replay_violation(inst.system, inst.f, result)
        elif inst.kind == "cyclic-group":
            ok = replay_abelian_violation(inst.modulus, inst.shifts, inst.f,
                                          result)
        elif inst.kind == "z-window":
            ok = replay_abelian_violation(None, inst.shifts, inst.f, result)
        else:
            return _verify_doc(False, "no star certificates on lattice windows")
        return _verify_doc(ok, "" if ok else "violation does not replay")
    if isinstance(result, tuple) and all(isinstance(c, int) for c in result):
        if inst.kind != "lattice-window":
            return _verify_doc(False, "point certificate needs a lattice window")
        witness = _window_point_nonzero(inst.window, result)
        return _verify_doc(witness, "" if witness
                           else "mixed difference vanishes at the point")
    return _verify_doc(False, f"unexpected result type "
                              f"{type(result).__name__} for star-check")


def _window_point_nonzero(window: LatticeWindow, point: Sequence[int]) -> bool:
    d = len(window.dims)
    if len(point) != d or any(not 0 <= point[j] < window.dims[j] - 1
                              for j in range(d)):
        return False
    total = Fraction(0)
    for mask in range(1 << d):
        coords = tuple(point[j] + (mask >> j & 1) for j in range(d))
        value = window.get(coords)
        total += value if (d - bin(mask).count("1")) % 2 == 0 else -value
    return total != 0


def _verify_dual(system: CommutingSystem, f: RationalFunction,
                 dual: DualCertificate) -> Tuple[int, dict]:
    if len(dual.weights) != system.size:
        return _verify_doc(False, "weight count differs from domain size")
    if dual.pair(f) == 0:
        return _verify_doc(False, "dual functional vanishes on f")
    for j, t in enumerate(system.transforms):
        for e in kernel_basis(t):
            if dual.pair(e) != 0:
                return _verify_doc(
                    False, f"dual functional does not vanish on an "
                           f"invariant function of transform {j}")
    return _verify_doc(True)


def _verify_oracle_result(inst: Instance, result: Any) -> Tuple[int, dict]:
    if inst.kind == "lattice-window":
        if isinstance(result, tuple) and all(isinstance(p, LatticeWindow)
                                             for p in result):
            return _verify_lattice_parts(inst.window, result)
        if isinstance(result, DualCertificate):
            return _verify_window_dual(inst.window, result)
        return _verify_doc(False, f"unexpected result type "
                                  f"{type(result).__name__} for window oracle")
    if isinstance(result, Decomposition):
        return _verify_decomposition_result(inst, result)
    if isinstance(result, DualCertificate):
        return _verify_dual(inst.system, inst.f, result)
    return _verify_doc(False, f"unexpected result type "
                              f"{type(result).__name__} for oracle")


def _verify_window_dual(window: LatticeWindow,
                        dual: DualCertificate) -> Tuple[int, dict]:
    if len(dual.weights) != window.size:
        return _verify_doc(False, "weight count differs from window size")
    f = RationalFunction(window.values)
    if dual.pair(f) == 0:
        return _verify_doc(False, "dual functional vanishes on f")
    d = len(window.dims)
    for j in range(d):
        sums: dict = {}
        for idx in range(window.size):
            coords = window.coords(idx)
            key = tuple(c for i, c in enumerate(coords) if i != j)
            sums[key] = sums.get(key, Fraction(0)) + dual.weights[idx]
        for key, total in sums.items():
            if total != 0:
                return _verify_doc(
                    False, f"dual functional does not vanish on an axis-{j} "
                           f"invariant indicator")
    return _verify_doc(True)


def _verify_lattice_parts(window: LatticeWindow,
                          parts: Sequence[LatticeWindow]) -> Tuple[int, dict]:
    d = len(window.dims)
    if len(parts) != d or any(p.dims != window.dims for p in parts):
        return _verify_doc(False, "parts do not match the window shape")
    for idx in range(window.size):
        if sum(p.values[idx] for p in parts) != window.values[idx]:
            return _verify_doc(False,
                               f"parts do not sum to f at {window.coords(idx)}")
    for j, p in enumerate(parts):
        stride = window.strides()[j]
        for idx in range(window.size):
            coords = window.coords(idx)
            if coords[j] + 1 < window.dims[j] \
                    and p.values[idx + stride] != p.values[idx]:
                return _verify_doc(False,
                                   f"part {j} varies along axis {j} at {coords}")
    return _verify_doc(True)


def _verify_lattice_result(inst: Instance, result: Any) -> Tuple[int, dict]:
    if isinstance(result, tuple) and result and all(
            isinstance(p, LatticeWindow) for p in result):
        return _verify_lattice_parts(inst.window, result)
    if isinstance(result, tuple) and all(isinstance(c, int) for c in result):
        ok = _window_point_nonzero(inst.window, result)
        return _verify_doc(ok, "" if ok
                           else "mixed difference vanishes at the point")
    return _verify_doc(False, f"unexpected result type "
                              f"{type(result).__name__} for lattice-decompose")


def _verify_bounded_result(inst: Instance, result: Any) -> Tuple[int, dict]:
    t, s = inst.system.transforms
    g = inst.f
    if isinstance(result, BoundedTransfer):
        h, c = result.solution, result.bound
        if len(h) != inst.system.size:
            return _verify_doc(False, "solution length differs from domain")
        for x in range(inst.system.size):
            if h[t[x]] - h[x] != g[x]:
                return _verify_doc(False, f"transfer identity fails at {x}")
        if not is_invariant(s, h):
            return _verify_doc(False, "solution is not s-invariant")
        fresh = partial_sum_bound(t, g)
        if fresh != c:
            return _verify_doc(False, "stored bound differs from recomputed")
        if h.max_abs() > 2 * c:
            return _verify_doc(False, "solution exceeds twice the bound")
        return _verify_doc(True)
    if isinstance(result, ConstrainedObstruction):
        def walk(x, tk, sl):
            for _ in range(sl):
                x = s[x]
            for _ in range(tk):
                x = t[x]
            return x

        if walk(result.x, result.k, result.l) != walk(result.x, 0, result.l2):
            return _verify_doc(False, "witness relation does not hold")
        p = walk(result.x, 0, result.l)
        total = Fraction(0)
        for _ in range(result.k):
            total += g[p]
            p = t[p]
        if total != result.total or total == 0:
            return _verify_doc(False, "obstruction sum does not replay")
        return _verify_doc(True)
    return _verify_doc(False, f"unexpected result type "
                              f"{type(result).__name__} for bounded-transfer")


def _verify_report(result: Any, bound: Optional[int]) -> Tuple[int, dict]:
    if not isinstance(result, SearchReport):
        return _verify_doc(False, f"unexpected result type "
                                  f"{type(result).__name__} for search")
    for c in result.candidates:
        if _reverify_candidate(c.transforms, c.size, c.values, bound) is None:
            return _verify_doc(False, f"candidate from trial {c.trial} "
                                      f"does not re-verify")
    return _verify_doc(True)


# ---------------------------------------------------------------------------
# subcommand handlers


def _cmd_validate(args) -> Tuple[int, dict]:
    inst = _read_instance(args.instance)
    doc: dict = {"result": "ok", "kind": inst.kind}
    if inst.system is not None:
        doc["size"] = inst.system.size
        doc["transforms"] = inst.system.n
    if inst.kind == "z-window":
        doc["length"] = inst.length
        doc["shifts"] = list(inst.shifts)
    if inst.kind == "lattice-window":
        doc["dims"] = list(inst.window.dims)
    return 0, doc


def _require_system(inst: Instance, what: str) -> None:
    if inst.system is None:
        raise ParseError(f"{what} needs a finite or cyclic-group instance, "
                         f"got kind {inst.kind!r}")


def _cmd_decompose(args) -> Tuple[int, dict]:
    inst = _read_instance(args.instance)
    _require_system(inst, "decompose")
    if args.verify:
        return _verify_decomposition_result(inst, _read_result(args.verify))
    ts = inst.system.transforms
    if inst.system.n == 1:
        outcome = decompose_one(ts[0], inst.f)
    elif inst.system.n == 2:
        outcome = decompose_two(ts[0], ts[1], inst.f, args.bound)
    elif inst.system.n == 3:
        outcome = decompose_three(ts[0], ts[1], ts[2], inst.f, args.bound)
    else:
        raise ParseError("no constructive decomposition for more than three "
                         "transforms; use the oracle subcommand")
    if isinstance(outcome, Decomposition):
        return 0, serialize.decomposition_to_json(outcome)
    return 1, serialize.violation_to_json(outcome)


def _cmd_star_check(args) -> Tuple[int, dict]:
    inst = _read_instance(args.instance)
    if args.verify:
        return _verify_star_result(inst, _read_result(args.verify), args.bound)
    if inst.kind == "finite":
        violation = check_star(inst.system, inst.f, args.bound)
    elif inst.kind == "cyclic-group":
        violation = check_star_abelian(inst.modulus, inst.shifts, inst.f,
                                       args.bound)
    elif inst.kind == "z-window":
        violation = check_star_abelian(None, inst.shifts, inst.f, args.bound)
    else:
        point = mixed_delta_witness(inst.window)
        if point is None:
            return 0, {"result": "pass"}
        return 1, serialize.point_violation_to_json(point)
    if violation is None:
        return 0, {"result": "pass"}
    return 1, serialize.violation_to_json(violation)


def _cmd_oracle(args) -> Tuple[int, dict]:
    inst = _read_instance(args.instance)
    if args.verify:
        return _verify_oracle_result(inst, _read_result(args.verify))
    if inst.kind == "lattice-window":
        outcome = lattice_oracle_decompose(inst.window)
        if isinstance(outcome, DualCertificate):
            return 1, serialize.dual_to_json(outcome)
        return 0, serialize.lattice_parts_to_json(inst.window.dims, outcome)
    if inst.kind == "z-window":
        raise ParseError("the oracle needs total self-maps; z-window shifts "
                         "are partial — use star-check")
    outcome = oracle_decompose(inst.system, inst.f)
    if isinstance(outcome, Decomposition):
        return 0, serialize.decomposition_to_json(outcome)
    return 1, serialize.dual_to_json(outcome)


def _cmd_lattice_decompose(args) -> Tuple[int, dict]:
    inst = _read_instance(args.instance)
    if inst.kind != "lattice-window":
        raise ParseError("lattice-decompose needs a lattice-window instance, "
                         f"got kind {inst.kind!r}")
    if args.verify:
        return _verify_lattice_result(inst, _read_result(args.verify))
    point = mixed_delta_witness(inst.window)
    if point is not None:
        return 1, serialize.point_violation_to_json(point)
    parts = lattice_decompose(inst.window, base=args.base)
    return 0, serialize.lattice_parts_to_json(inst.window.dims, parts)


def _cmd_bounded_transfer(args) -> Tuple[int, dict]:
    inst = _read_instance(args.instance)
    _require_system(inst, "bounded-transfer")
    if inst.system.n != 2:
        raise ParseError("bounded-transfer needs exactly two transforms "
                         "(T, S) with values giving the right-hand side")
    if args.verify:
        return _verify_bounded_result(inst, _read_result(args.verify))
    t, s = inst.system.transforms
    outcome = solve_bounded_transfer(t, s, inst.f)
    if isinstance(outcome, ConstrainedObstruction):
        return 1, serialize.constrained_obstruction_to_json(outcome)
    return 0, serialize.bounded_to_json(outcome)


def _cmd_search(args) -> Tuple[int, dict]:
    if args.verify:
        return _verify_report(_read_result(args.verify), args.bound)
    report = search_counterexample(n=args.n, max_size=args.max_size,
                                   trials=args.trials, seed=args.seed,
                                   workers=args.workers, bound=args.bound)
    clean = (report.discrepancies == 0 and report.necessity_violations == 0
             and not report.candidates)
    return (0 if clean else 1), serialize.report_to_json(report)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="perdec",
        description="Decide and construct sums of invariant functions over "
                    "commuting transformations, with exact certificates.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, handler, needs_instance=True, verify=True):
        p = sub.add_parser(name)
        if needs_instance:
            p.add_argument("instance",
                           help="instance file path, or - for standard input")
        p.add_argument("--bound", type=int, default=None,
                       help="exponent search bound override")
        if verify:
            p.add_argument("--verify", metavar="CERTFILE", default=None,
                           help="re-check a previously emitted result file "
                                "against the instance")
        p.set_defaults(handler=handler)
        return p

    add("validate", _cmd_validate, verify=False)
    add("decompose", _cmd_decompose)
    add("star-check", _cmd_star_check)
    add("oracle", _cmd_oracle)
    lat = add("lattice-decompose", _cmd_lattice_decompose)
    lat.add_argument("--base", type=int, default=0,
                     help="base hyperplane coordinate for the lift")
    add("bounded-transfer", _cmd_bounded_transfer)
    p = add("search", _cmd_search, needs_instance=False)
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--max-size", type=int, default=6)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    return parser


def run_command(argv: Optional[Sequence[str]] = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        code, doc = args.handler(args)
    except ParseError as exc:
        _emit({"error": str(exc), "path": exc.path})
        return 2
    except NotCommutingError as exc:
        _emit({"error": "not-commuting", "witness": list(exc.witness)})
        return 2
    except (RangeError, PreconditionError, BoundTooSmallError) as exc:
        _emit({"error": str(exc)})
        return 2
    _emit(doc)
    return code


def main() -> None:
    sys.exit(run_command())


if __name__ == "__main__":
    main()
