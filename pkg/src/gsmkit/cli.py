"""Command-line interface.

Exit codes: 0 ok, 1 usage or parse error, 2 infeasible construction or
class/dimension mismatch, 3 validation failure.
"""

from __future__ import annotations

import argparse
import sys
from typing import Sequence

import numpy as np

from . import __version__
from .applications import (
    c_max, correlation_matrix, eur_bound, random_separable_state, separability_test,
)
from .basis import gell_mann_basis, partition_basis, random_partition
from .construction import (
    ALL_VARIANTS, Variant, block_params, block_t_range, build_measurement_block, t_from_r, t_from_x,
    x_from_t,
)
from .designs import certify_design
from .exceptions import BasisError, GSMError, NotRClassError, PositivityError
from .gsm import classify, is_informationally_complete, verify_gsm
from .operator_algebra import haar_unitary, max_entangled_projector, random_density_matrix
from .serialization import (
    FormatError, basis_from_dict, dumps, iter_states, load_measurement, measured, measurement_to_dict,
)

EXIT_OK, EXIT_USAGE, EXIT_INFEASIBLE, EXIT_INVALID = 0, 1, 2, 3
DEFAULT_TOL = 1e-9


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


class _Exit(Exception):
    def __init__(self, code: int, message: str = ""):
        super().__init__(message)
        self.code = code


def _csv(text: str, conv):
    try:
        return [conv(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise UsageError(f"cannot parse list {text!r}: {exc}") from None


def _emit(doc: dict, out: str | None) -> None:
    text = dumps(doc)
    if out and out != "-":
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path) as fh:
            return fh.read()
    except OSError as exc:
        raise FormatError(str(exc)) from None


def _load_gsm(path: str, tol: float):
    try:
        with open(path) as fh:
            d, blocks, prov = load_measurement(fh)
    except OSError as exc:
        raise FormatError(str(exc)) from None
    return d, blocks, prov, verify_gsm(blocks, d, tol)


# -- construct ---------------------------------------------------------------

def _parse_variants(text: str | None, n: int) -> list[tuple[bool, int | None]]:
    """Per-block ``(primed, sign or None)``; a single entry is broadcast."""
    if text is None:
        return [(False, None)] * n
    items = [s.strip() for s in text.split(",") if s.strip()]
    out = []
    for s in items:
        if s in ("unprimed", "primed"):
            out.append((s == "primed", None))
            continue
        try:
            v = Variant.parse(s)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        out.append((v.primed, v.sign))
    if len(out) == 1:
        out = out * n
    if len(out) != n:
        raise UsageError(f"--variant lists {len(out)} entries for {n} blocks")
    return out


def _per_block(values, n, flag):
    if len(values) == 1:
        values = values * n
    if len(values) != n:
        raise UsageError(f"{flag} lists {len(values)} values for {n} blocks")
    return values


def _resolve_block(p, alpha, primed, sign, args, tvals, xvals):
    m, d = p.block_sizes[alpha], p.dim
    if args.t is not None:
        t = tvals[alpha]
        if t == 0:
            raise _Exit(EXIT_INFEASIBLE, "t = 0 gives the trivial POVM I/M and is excluded")
        if sign is not None and np.sign(t) != sign:
            raise UsageError(f"block {alpha}: t = {t} contradicts variant sign")
        return Variant(primed, int(np.sign(t))), t
    if args.x is not None or args.r is not None:
        if sign is None:
            raise UsageError("--x/--r need an explicit sign in --variant (e.g. unprimed:+)")
        v = Variant(primed, sign)
        try:
            t = t_from_x(xvals[alpha], m, d, v) if args.x is not None else t_from_r(args.r, m, v)
        except ValueError as exc:
            raise _Exit(EXIT_INFEASIBLE, f"block {alpha}: {exc}") from None
        return v, t
    if args.t_max or args.t_min:
        lo, hi = block_t_range(p, alpha, primed)
        t = hi if args.t_max else lo
        if sign is not None and np.sign(t) != sign:
            raise UsageError(f"block {alpha}: --{'t-max' if args.t_max else 't-min'} contradicts variant sign")
        return Variant(primed, int(np.sign(t))), t
    # --projective
    target = min(d * d / m**2, d / m)
    candidates = [v for v in ALL_VARIANTS if v.primed == primed and (sign is None or v.sign == sign)]
    if args.variant is None:
        candidates = list(ALL_VARIANTS)
    for v in candidates:
        lo, hi = block_t_range(p, alpha, v.primed)
        t = hi if v.sign > 0 else lo
        if abs(x_from_t(t, m, d, v.primed) - target) <= args.tolerance:
            return v, t
    raise _Exit(EXIT_INFEASIBLE, f"block {alpha}: no variant reaches the projective value x = {target!r}")


def cmd_construct(args) -> int:
    d = args.d
    sizes = _csv(args.blocks, int)
    modes = [args.t is not None, args.x is not None, args.r is not None, args.t_max, args.t_min, args.projective]
    if sum(modes) != 1:
        raise UsageError("choose exactly one of --t, --x, --r, --t-max, --t-min, --projective")
    try:
        if args.basis:
            import json
            ops = basis_from_dict(json.loads(_read_text(args.basis)))
            p = partition_basis(ops, sizes)
            basis_name = f"file:{args.basis}"
        elif args.seed is not None:
            p = random_partition(d, sizes, args.seed)
            basis_name = "gell-mann+random-rotation"
        else:
            p = partition_basis(gell_mann_basis(d), sizes)
            basis_name = "gell-mann"
    except (ValueError, BasisError) as exc:
        raise UsageError(str(exc)) from None
    if p.dim != d:
        raise UsageError(f"basis acts on d = {p.dim}, but -d {d} was given")

    n = p.n_blocks
    variants = _parse_variants(args.variant, n)
    tvals = _per_block(_csv(args.t, float), n, "--t") if args.t is not None else None
    xvals = _per_block(_csv(args.x, float), n, "--x") if args.x is not None else None

    blocks, params = [], []
    for alpha, (primed, sign) in enumerate(variants):
        v, t = _resolve_block(p, alpha, primed, sign, args, tvals, xvals)
        try:
            blocks.append(build_measurement_block(p, alpha, v, t))
        except PositivityError as exc:
            raise _Exit(EXIT_INFEASIBLE, str(exc)) from None
        params.append(block_params(p, alpha, v, t))

    prov = {
        "basis": basis_name,
        "seed": args.seed,
        "variants": [str(bp.variant) for bp in params],
        "t": [bp.t for bp in params],
        "x": [bp.x for bp in params],
        "t_range": [list(bp.t_range) for bp in params],
    }
    _emit(measurement_to_dict(blocks, d, prov), args.output)
    return EXIT_OK


# -- verify / certify / bounds ------------------------------------------------

def _violations_doc(res) -> list:
    return [
        {"condition": v.condition, "indices": list(map(int, v.indices)),
         "expected": float(v.expected), "measured": float(v.measured), "deviation": float(v.deviation)}
        for v in res.violations
    ]


def _verify_doc(res, tol: float) -> dict:
    doc = {
        "format_version": "1",
        "command": "verify",
        "valid": res.ok,
        "max_deviation": measured(res.max_deviation, tol),
        "violations": _violations_doc(res),
    }
    g = res.gsm
    if g is None:
        return doc
    pr = g.params
    doc["dimension"] = g.dim
    doc["block_sizes"] = list(g.block_sizes)
    doc["parameters"] = {
        "w": measured(pr.w, tol), "x": measured(pr.x, tol), "y": measured(pr.y, tol),
        "z": measured(pr.z, tol), "x_minus_y": measured(pr.x - pr.y, tol),
    }
    ic = is_informationally_complete(g)
    doc["informationally_complete"] = {
        "value": ic.informationally_complete,
        "total_elements": ic.total_elements,
        "required_elements": ic.required_elements,
        "rank": ic.rank,
        "required_rank": ic.required_rank,
        "rank_rtol": 1e-8,
    }
    cls = classify(g, tol)
    doc["classification"] = {
        "tags": sorted(t.value for t in cls.tags),
        "r": None if cls.r is None else measured(cls.r, tol),
        "s": None if cls.s is None else measured(cls.s, tol),
    }
    return doc


def cmd_verify(args) -> int:
    tol = args.tolerance
    _, _, _, res = _load_gsm(args.file, tol)
    _emit(_verify_doc(res, tol), args.output)
    return EXIT_OK if res.ok else EXIT_INVALID


def cmd_certify(args) -> int:
    tol = args.tolerance
    _, _, _, res = _load_gsm(args.file, tol)
    if not res.ok:
        _emit(_verify_doc(res, tol), args.output)
        return EXIT_INVALID
    cert = certify_design(res.gsm, tol)
    doc = {
        "format_version": "1",
        "command": "certify",
        "kind": cert.kind.value,
        "kappa_plus": measured(cert.kappa_plus, tol),
        "kappa_minus": measured(cert.kappa_minus, tol),
        "kappa_map": measured(list(cert.kappa_map), tol),
        "mu": cert.mu,
        "r": None if cert.r is None else measured(cert.r, tol),
        "s": None if cert.s is None else measured(cert.s, tol),
        "weighted": cert.weighted,
        "residual_operator": measured(cert.residual_operator, tol),
        "residual_map": measured(cert.residual_map, tol),
        "choi_discrepancy": measured(cert.choi_discrepancy, tol),
        "paths_agree": cert.paths_agree,
    }
    _emit(doc, args.output)
    return EXIT_OK


def cmd_bounds(args) -> int:
    tol = args.tolerance
    _, _, _, res = _load_gsm(args.file, tol)
    if not res.ok:
        _emit(_verify_doc(res, tol), args.output)
        return EXIT_INVALID
    g = res.gsm
    try:
        cm = c_max(g)
        eb = eur_bound(g)
    except NotRClassError as exc:
        raise _Exit(EXIT_INFEASIBLE, str(exc)) from None
    doc = {
        "format_version": "1",
        "command": "bounds",
        "r": measured(classify(g, tol).r, tol),
        "mu": g.mu,
        "c_max": measured(cm, tol),
        "eur_bound": {"nats": measured(eb.nats, tol), "bits": measured(eb.bits, tol)},
    }
    _emit(doc, args.output)
    return EXIT_OK


# -- detect ------------------------------------------------------------------

def _sample_states(kind: str, count: int, dA: int, dB: int, seed):
    rng = np.random.default_rng(seed)
    for i in range(count):
        if kind == "bell":
            if dA != dB:
                raise _Exit(EXIT_INFEASIBLE, "bell sampling needs d_A = d_B")
            u = np.kron(np.eye(dA), haar_unitary(dB, rng))
            rho = u @ max_entangled_projector(dA) @ u.conj().T
        elif kind == "separable":
            rho = random_separable_state(dA, dB, 10, rng)
        else:
            rho = random_density_matrix(dA * dB, seed=rng)
        yield f"{kind}{i}", (dA, dB), rho


def cmd_detect(args) -> int:
    tol = args.tolerance
    gs = []
    for path in (args.gsm_a, args.gsm_b):
        _, _, _, res = _load_gsm(path, tol)
        if not res.ok:
            _emit(_verify_doc(res, tol), args.output)
            return EXIT_INVALID
        gs.append(res.gsm)
    gA, gB = gs
    for side, g in (("A", gA), ("B", gB)):
        try:
            c_max(g)
        except NotRClassError as exc:
            raise _Exit(EXIT_INFEASIBLE, f"measurement {side}: {exc}") from None

    if (args.states is None) == (args.sample is None):
        raise UsageError("give exactly one of --states or --sample")
    if args.states is not None:
        states = list(iter_states(_read_text(args.states)))
    else:
        states = list(_sample_states(args.kind, args.sample, gA.dim, gB.dim, args.seed))

    results = []
    counts = {"ENTANGLED": 0, "INCONCLUSIVE": 0}
    for label, dims, rho in states:
        if tuple(dims) != (gA.dim, gB.dim):
            raise _Exit(EXIT_INFEASIBLE, f"state {label}: dims {tuple(dims)} do not match measurements "
                                         f"({gA.dim}, {gB.dim})")
        try:
            rep = separability_test(gA, gB, rho, tol)
        except GSMError as exc:
            raise _Exit(EXIT_USAGE, f"state {label}: {exc}") from None
        counts[rep.verdict.value] += 1
        results.append({
            "label": label,
            "verdict": rep.verdict.value,
            "trace_norm": measured(rep.trace_norm, tol),
            "trace_norm_bound": rep.trace_norm_bound,
            "trace_norm_margin": rep.trace_norm_margin,
            "trace": None if rep.trace is None else measured(rep.trace, tol),
            "trace_bound": rep.trace_bound,
            "trace_margin": rep.trace_margin,
            "violated": rep.violations,
        })
    doc = {
        "format_version": "1",
        "command": "detect",
        "c_max": {"A": c_max(gA), "B": c_max(gB)},
        "tolerance": tol,
        "summary": counts,
        "states": results,
    }
    _emit(doc, args.output)
    return EXIT_OK


# -- entry point -------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="gsmkit", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"gsmkit {__version__}")
    common = _Parser(add_help=False)
    common.add_argument("--tolerance", type=float, default=DEFAULT_TOL,
                        help="tolerance applied to every check (default 1e-9)")
    common.add_argument("-o", "--output", help="write the JSON result here instead of stdout")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    c = sub.add_parser("construct", parents=[common], help="build a measurement from an operator basis")
    c.add_argument("-d", type=int, required=True, help="Hilbert space dimension")
    c.add_argument("--blocks", required=True, help="comma-separated POVM sizes M_alpha")
    c.add_argument("--variant", help="per-block variant(s): unprimed|primed[:+|:-], comma-separated")
    c.add_argument("--t", help="t per block (comma-separated)")
    c.add_argument("--x", help="x per block; needs a signed --variant")
    c.add_argument("--r", type=float, help="common x - y for every block; needs a signed --variant")
    c.add_argument("--t-max", action="store_true", help="upper end of each block's t-range")
    c.add_argument("--t-min", action="store_true", help="lower end of each block's t-range")
    c.add_argument("--projective", action="store_true", help="largest x = min(d^2/M^2, d/M) per block")
    c.add_argument("--basis", help="JSON basis file (default: generalised Gell-Mann)")
    c.add_argument("--seed", type=int, help="randomly rotate the Gell-Mann basis with this seed")
    c.set_defaults(func=cmd_construct)

    for name, func, text in (("verify", cmd_verify, "check the symmetry conditions of a measurement file"),
                             ("certify", cmd_certify, "conical 2-design certificate"),
                             ("bounds", cmd_bounds, "index-of-coincidence and entropic bounds")):
        s = sub.add_parser(name, parents=[common], help=text)
        s.add_argument("file")
        s.set_defaults(func=func)

    t = sub.add_parser("detect", parents=[common], help="screen bipartite states for entanglement")
    t.add_argument("gsm_a")
    t.add_argument("gsm_b")
    t.add_argument("--states", help="state batch file, or - for stdin")
    t.add_argument("--sample", type=int, help="number of states to sample instead")
    t.add_argument("--kind", choices=["bell", "separable", "random"], default="separable")
    t.add_argument("--seed", type=int, default=0)
    t.set_defaults(func=cmd_detect)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise UsageError("a subcommand is required")
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except FormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except _Exit as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except (ValueError, GSMError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
