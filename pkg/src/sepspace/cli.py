"""Command-line entry point: ``sepspace <command> ...``.

Exit codes: 0 when every check passes, 1 when a verification fails, 2 on
malformed input.  Reports are printed as ``key: value`` lines.
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import io
from .basis import BasisKind, make_basis, spectrum_report, verify_basis
from .crossnorm import decomposition_cross_bound, gamma2_pure, schmidt_coefficients
from .decomposition import (
    diagnostics,
    maxent_decomposition,
    pure_state_decomposition,
    verify,
)
from .duality import (
    GeneratorSet,
    cone_membership,
    dual_violation,
    measurement_compatible,
    pauli_family,
    qubit_region_predicate,
    trivial_family,
    unit_trace_extremality_probe,
)
from .errors import ConvergenceError, InputError
from .lhv import lhv_from_decomposition, lhv_sample, lhv_table, quantum_table
from .linalg import PAULI_I, PAULI_X, PAULI_Y, PAULI_Z, bloch_operator, bloch_vector, maxent_state, schmidt_state

EXIT_PASS, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


@dataclass
class RunReport:
    command: str
    passed: bool = True
    metrics: dict[str, float] = field(default_factory=dict)
    artifacts_written: list[str] = field(default_factory=list)
    lines: list[str] = field(default_factory=list)

    def metric(self, name: str, value) -> None:
        self.metrics[name] = float(value)
        self.lines.append(f"{name}: {float(value):.17g}")

    def check(self, name: str, ok: bool) -> None:
        self.passed = self.passed and bool(ok)
        self.lines.append(f"{name}: {'pass' if ok else 'FAIL'}")

    def note(self, text: str) -> None:
        self.lines.append(text)

    def write(self, path, obj) -> None:
        self.artifacts_written.append(io.write_json(path, obj))

    def render(self) -> str:
        out = [f"command: {self.command}", *self.lines]
        out += [f"wrote: {p}" for p in self.artifacts_written]
        out.append(f"result: {'PASS' if self.passed else 'FAIL'}")
        return "\n".join(out)


# -- shorthand parsing ------------------------------------------------------


def _floats(text: str) -> np.ndarray:
    try:
        return np.array([float(t) for t in text.split(",")])
    except ValueError as exc:
        raise InputError(f"bad number list {text!r}") from exc


def schmidt_from_weights(text: str) -> np.ndarray:
    """``0.9,0.1`` lists the squared Schmidt coefficients."""
    w = _floats(text)
    if np.any(w < 0) or abs(w.sum() - 1) > 1e-9:
        raise InputError("schmidt weights must be nonnegative and sum to 1")
    return np.sort(np.sqrt(w / w.sum()))[::-1]


def parse_state(arg: str):
    """Return ``(projector, schmidt vector or None)`` for ``maxent:d``, ``schmidt:...`` or a file."""
    if arg.startswith("maxent:"):
        try:
            d = int(arg.split(":", 1)[1])
        except ValueError as exc:
            raise InputError(f"bad target {arg!r}") from exc
        if d < 1:
            raise InputError("maxent dimension must be positive")
        return maxent_state(d), np.full(d, 1 / np.sqrt(d))
    if arg.startswith("schmidt:"):
        lam = schmidt_from_weights(arg.split(":", 1)[1])
        return schmidt_state(lam), lam
    return io.operator_from_json(io.read_json(arg)), None


def parse_operator(arg: str) -> np.ndarray:
    if arg.startswith("bloch:"):
        x = _floats(arg.split(":", 1)[1])
        if x.size != 3:
            raise InputError("bloch: needs three components")
        return bloch_operator(x)
    return io.operator_from_json(io.read_json(arg))


def parse_family(arg: str):
    if arg == "pauli":
        return pauli_family()
    if arg.startswith("trivial:"):
        try:
            return trivial_family(int(arg.split(":", 1)[1]))
        except ValueError as exc:
            raise InputError(f"bad family {arg!r}") from exc
    return io.family_from_json(io.read_json(arg))


def load_basis(path):
    return io.basis_from_json(io.read_json(path))


def load_decomposition(path):
    return io.decomposition_from_json(io.read_json(path))


def default_seed(seed):
    if seed is not None:
        return seed
    env = os.environ.get("SEPSPACE_SEED")
    if env is None:
        return 0
    try:
        return int(env)
    except ValueError as exc:
        raise InputError(f"SEPSPACE_SEED must be an integer, got {env!r}") from exc


# -- commands ---------------------------------------------------------------


def cmd_basis_gen(args, rep: RunReport):
    B = make_basis(BasisKind.parse(args.kind), args.dim, default_seed(args.seed))
    r = verify_basis(B)
    rep.note(f"kind: {B.kind.value}")
    rep.metric("dim", B.dim)
    rep.metric("gram_residual", r.gram_residual)
    rep.check("basis_axioms", r.passed)
    if args.out:
        rep.write(args.out, io.basis_to_json(B))


def cmd_basis_verify(args, rep: RunReport):
    B = load_basis(args.file)
    r = verify_basis(B, args.tol)
    rep.note(f"kind: {B.kind.value}")
    rep.metric("dim", B.dim)
    rep.metric("gram_residual", r.gram_residual)
    rep.metric("norm_residual", r.norm_residual)
    rep.metric("hermitian_residual", r.hermitian_residual)
    if r.trace_residual is not None:
        rep.metric("trace_residual", r.trace_residual)
    rep.metric("min_real_trace", r.min_real_trace)
    if B.hermitian:
        rep.metric("distinct_spectra", spectrum_report(B)["distinct"])
    for name, ok in r.checks.items():
        rep.check(name, ok)


def cmd_decompose_maxent(args, rep: RunReport):
    B = load_basis(args.basis)
    D = maxent_decomposition(B)
    _report_decomposition(D, maxent_state(B.dim), args.tol, rep)
    if args.out:
        rep.write(args.out, io.decomposition_to_json(D))


def cmd_decompose_pure(args, rep: RunReport):
    target, lam = parse_state(args.state)
    if lam is None:
        raise InputError("decompose pure needs a maxent:d or schmidt:... state")
    D = pure_state_decomposition(lam)
    lam = lam[lam > 1e-12]
    _report_decomposition(D, schmidt_state(lam), args.tol, rep)
    rep.metric("gamma2", gamma2_pure(lam))
    if args.out:
        rep.write(args.out, io.decomposition_to_json(D))


def _report_decomposition(D, target, tol, rep: RunReport):
    v = verify(D, target, tol)
    prods = D.norm_products()
    rep.metric("term_count", len(D))
    rep.metric("reconstruction_error", v.distance)
    rep.metric("max_norm_product", prods.max())
    rep.metric("min_norm_product", prods.min())
    rep.check("weights_valid", v.weights_valid)
    rep.check("reconstruction", v.passed)


def cmd_verify(args, rep: RunReport):
    D = load_decomposition(args.decomposition)
    target, _ = parse_state(args.target)
    if target.shape[0] != D.dim_a * D.dim_b:
        raise InputError("target dimension does not match the decomposition")
    _report_decomposition(D, target, args.tol, rep)


def cmd_diagnostics(args, rep: RunReport):
    D = load_decomposition(args.decomposition)
    B = load_basis(args.basis)
    target = parse_state(args.target)[0] if args.target else None
    g = diagnostics(D, B, target)
    rep.metric("reconstruction_error", g.reconstruction_error)
    rep.metric("term_count", g.term_count)
    rep.metric("distinct_a", g.distinct_a)
    rep.metric("distinct_b", g.distinct_b)
    rep.metric("match_residual", g.match_residual)
    rep.metric("vectorsep_sum", g.vectorsep_sum.real)
    rep.metric("vectorsep_expected", g.vectorsep_expected.real)
    rep.metric("proportionality_residual", g.proportionality_residual)
    rep.metric("max_norm_product", g.norm_products.max())
    rep.metric("dim", B.dim)
    rep.note(f"all_terms_extremal: {str(g.all_terms_extremal).lower()}")
    rep.check("reconstruction", g.reconstruction_error <= args.tol)
    rep.check("match", g.match_residual <= args.tol)
    rep.check("vectorsep", abs(g.vectorsep_sum - g.vectorsep_expected) <= args.tol)


def cmd_crossnorm(args, rep: RunReport):
    if not args.state and not args.decomposition:
        raise InputError("crossnorm needs --state and/or --decomposition")
    g2 = None
    if args.state:
        if args.state.startswith(("maxent:", "schmidt:")):
            _, lam = parse_state(args.state)
        else:
            vec = np.asarray(io.read_json(args.state), dtype=float)
            if vec.ndim == 2:
                vec = vec[:, 0] + 1j * vec[:, 1]
            d = int(round(np.sqrt(vec.size)))
            lam = schmidt_coefficients(vec, d, d)
        g2 = gamma2_pure(lam)
        rep.metric("gamma2_pure", g2)
    if args.decomposition:
        D = load_decomposition(args.decomposition)
        mean, worst = decomposition_cross_bound(D)
        rep.metric("cross_bound_sum", mean)
        rep.metric("cross_bound_max", worst)
        rep.check("sum_le_max", mean <= worst + 1e-12)
        if g2 is not None:
            rep.check("bound_ge_gamma2", mean >= g2 - args.tol)
            rep.note(f"tight: {str(abs(mean - g2) <= args.tol).lower()}")


def cmd_dual_check(args, rep: RunReport):
    X = parse_operator(args.operator)
    F = parse_family(args.family)
    if args.transpose:
        F = F.transposed()
    hit = dual_violation(X, F)
    if hit is not None:
        m, a, val = hit
        rep.note(f"violation: povm {m} element {a} value {val:.17g}")
    rep.check("in_dual", hit is None)


def cmd_dual_region(args, rep: RunReport):
    B = load_basis(args.basis)
    if B.dim != 2:
        raise InputError("dual region is only tabulated for qubits")
    G = GeneratorSet.from_basis(B, include_quantum=True)
    axis = np.linspace(-1, 1, args.grid)
    verts = np.array([bloch_vector(C) for C in B])
    pts, numeric = [], []
    for x in axis:
        for y in axis:
            for z in axis:
                M = PAULI_I + x * PAULI_X + y * PAULI_Y + z * PAULI_Z
                pts.append((x, y, z))
                numeric.append(measurement_compatible(M, G, args.tol))
    pts = np.array(pts)
    numeric = np.array(numeric)
    analytic = qubit_region_predicate(pts, verts, args.tol)
    rep.metric("grid_points", len(pts))
    rep.metric("compatible_points", numeric.sum())
    rep.metric("disagreements", np.sum(numeric != analytic))
    rep.check("matches_analytic_region", bool(np.all(numeric == analytic)))
    if args.out:
        rep.write(args.out, {"vertices": verts.tolist(), "points": pts[numeric].tolist()})


def cmd_cone_member(args, rep: RunReport):
    B = load_basis(args.basis)
    X = parse_operator(args.operator)
    cert = cone_membership(X, GeneratorSet.from_basis(B), args.tol)
    rep.metric("residual", cert.residual)
    if cert.member:
        rep.note("coefficients: " + ",".join(f"{c:.17g}" for c in cert.coefficients))
    rep.check("member", cert.member)


def cmd_cone_probe(args, rep: RunReport):
    B = load_basis(args.basis)
    r = unit_trace_extremality_probe(GeneratorSet.from_basis(B, True), args.trials, default_seed(args.seed))
    rep.metric("dim", r.dim)
    rep.metric("trials", r.trials)
    rep.metric("max_norm_sq", r.max_norm_sq)
    rep.metric("bound_sq", r.bound_sq)
    rep.metric("max_density_norm", r.max_density_norm)
    rep.metric("max_certificate_slack", r.max_certificate_slack)
    rep.check("strictly_interior", r.passed)


def cmd_lhv_build(args, rep: RunReport):
    D = load_decomposition(args.decomposition)
    FA = parse_family(args.family_a)
    if args.transpose_b:
        FB = FA.transposed()
    elif args.family_b:
        FB = parse_family(args.family_b)
    else:
        raise InputError("give --family-b or --transpose-b")
    model = lhv_from_decomposition(D, FA, FB)
    na, nb = model.settings
    rep.metric("hidden_values", len(model.hidden_probs))
    rep.metric("settings_a", na)
    rep.metric("settings_b", nb)
    lows = [r.min() for r in model.responses_a + model.responses_b]
    rep.metric("min_response", min(lows))
    if args.target:
        state, _ = parse_state(args.target)
        dev = max(
            float(np.max(np.abs(lhv_table(model, i, j) - quantum_table(state, FA, FB, i, j))))
            for i in range(na)
            for j in range(nb)
        )
        rep.metric("max_deviation_from_quantum", dev)
        rep.check("reproduces_quantum", dev <= 1e-12)
    if args.out:
        rep.write(args.out, io.model_to_json(model))


def cmd_lhv_table(args, rep: RunReport):
    model = io.model_from_json(io.read_json(args.model))
    na, nb = model.settings
    pairs = [(args.a_setting, args.b_setting)] if args.a_setting is not None else [
        (i, j) for i in range(na) for j in range(nb)
    ]
    tables = []
    for i, j in pairs:
        t = lhv_table(model, i, j)
        tables.append(io.table_to_json(i, j, t))
        rep.note(f"settings: {i} {j}")
        rep.note(io.format_table(t))
    if args.out:
        rep.write(args.out, tables[0] if len(tables) == 1 else tables)


def cmd_lhv_sample(args, rep: RunReport):
    model = io.model_from_json(io.read_json(args.model))
    counts = lhv_sample(model, args.a_setting, args.b_setting, args.shots, default_seed(args.seed))
    rep.metric("shots", counts.sum())
    rep.note(io.format_table(counts))
    if args.out:
        rep.write(args.out, io.table_to_json(args.a_setting, args.b_setting, counts))


# -- parser -----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="sepspace", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def leaf(parent, name, func, help_=None):
        q = parent.add_parser(name, help=help_)
        q.set_defaults(func=func)
        q.add_argument("--tol", type=float, default=1e-10)
        return q

    basis = sub.add_parser("basis", help="generate or verify operator bases").add_subparsers(dest="action", required=True)
    q = leaf(basis, "gen", cmd_basis_gen)
    q.add_argument("--dim", type=int, required=True)
    q.add_argument("--kind", default="gell-mann", choices=[k.cli_name for k in BasisKind if k is not BasisKind.CUSTOM])
    q.add_argument("--seed", type=int)
    q.add_argument("--out")
    q = leaf(basis, "verify", cmd_basis_verify)
    q.add_argument("file")

    dec = sub.add_parser("decompose", help="build separable decompositions").add_subparsers(dest="action", required=True)
    q = leaf(dec, "maxent", cmd_decompose_maxent)
    q.add_argument("--basis", required=True)
    q.add_argument("--out")
    q = leaf(dec, "pure", cmd_decompose_pure)
    q.add_argument("--state", required=True, help="maxent:d or schmidt:w1,w2,... (squared coefficients)")
    q.add_argument("--out")

    q = leaf(sub, "verify", cmd_verify, "check a decomposition against a target state")
    q.add_argument("--decomposition", required=True)
    q.add_argument("--target", required=True)

    q = leaf(sub, "diagnostics", cmd_diagnostics, "coefficient-level checks of a decomposition")
    q.add_argument("--decomposition", required=True)
    q.add_argument("--basis", required=True)
    q.add_argument("--target")

    q = leaf(sub, "crossnorm", cmd_crossnorm, "pure-state cross norm and decomposition bounds")
    q.add_argument("--state")
    q.add_argument("--decomposition")

    dual = sub.add_parser("dual", help="dual-cone checks").add_subparsers(dest="action", required=True)
    q = leaf(dual, "check", cmd_dual_check)
    q.add_argument("--operator", required=True, help="bloch:x,y,z or operator JSON")
    q.add_argument("--family", required=True, help="pauli, trivial:d or family JSON")
    q.add_argument("--transpose", action="store_true")
    q = leaf(dual, "region", cmd_dual_region)
    q.add_argument("--basis", required=True)
    q.add_argument("--grid", type=int, default=50)
    q.add_argument("--out")

    cone = sub.add_parser("cone", help="conic hull membership and extremality probe").add_subparsers(
        dest="action", required=True
    )
    q = leaf(cone, "member", cmd_cone_member)
    q.add_argument("--basis", required=True, help="basis whose elements generate the cone")
    q.add_argument("--operator", required=True)
    q = leaf(cone, "probe", cmd_cone_probe)
    q.add_argument("--basis", required=True)
    q.add_argument("--trials", type=int, default=10_000)
    q.add_argument("--seed", type=int)

    lhv = sub.add_parser("lhv", help="local hidden variable models").add_subparsers(dest="action", required=True)
    q = leaf(lhv, "build", cmd_lhv_build)
    q.add_argument("--decomposition", required=True)
    q.add_argument("--family-a", required=True)
    q.add_argument("--family-b")
    q.add_argument("--transpose-b", action="store_true")
    q.add_argument("--target", help="state to compare the model's statistics against")
    q.add_argument("--out")
    q = leaf(lhv, "table", cmd_lhv_table)
    q.add_argument("--model", required=True)
    q.add_argument("--a-setting", type=int)
    q.add_argument("--b-setting", type=int, default=0)
    q.add_argument("--out")
    q = leaf(lhv, "sample", cmd_lhv_sample)
    q.add_argument("--model", required=True)
    q.add_argument("--a-setting", type=int, default=0)
    q.add_argument("--b-setting", type=int, default=0)
    q.add_argument("--shots", type=int, default=10_000)
    q.add_argument("--seed", type=int)
    q.add_argument("--out")
    return p


def run(argv=None) -> tuple[int, RunReport]:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return (EXIT_PASS if exc.code == 0 else EXIT_INPUT), RunReport("parse", passed=exc.code == 0)
    name = " ".join(filter(None, [args.command, getattr(args, "action", None)]))
    rep = RunReport(name)
    try:
        out = getattr(args, "out", None)
        if out:
            Path(out).parent.mkdir(parents=True, exist_ok=True)
        args.func(args, rep)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        rep.passed = False
        return EXIT_INPUT, rep
    except ConvergenceError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        rep.passed = False
        return EXIT_FAIL, rep
    print(rep.render())
    return (EXIT_PASS if rep.passed else EXIT_FAIL), rep


def main(argv=None) -> None:
    sys.exit(run(argv)[0])


if __name__ == "__main__":
    main()
