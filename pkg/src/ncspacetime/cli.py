"""Command-line front end: verification suites and computations with
deterministic JSON reports.

Exit codes: 0 all checks passed, 1 at least one check failed, 2 usage or
parse error.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from .algebra import (GEN_NAMES, IM, P_IDS, X_IDS,
                      LieAlgebraSpec, Signature, build_deformed_algebra,
                      build_so6_algebra, contract_tangent, defining_rep,
                      element_matrix, identify_orthogonal, jacobi_defect,
                      physical_rep)
from .clifford import (ConstraintViolation, ResourceBudgetError,
                       closure_report)
from .connections import (PHI_TERM_SIGN, Connection, curvature_commutator,
                          expected_phi_term, field_strength,
                          curvature_phi_part)
from .diffcalc import (derivation_labels, derivation_set,
                       differential_of_generator, exterior_derivative,
                       reference_differential_p, reference_differential_x,
                       theta_name)
from .enveloping import (EnvElement, UnsupportedInverseError, casimir,
                         centrality_defect, env_commutator, env_product)
from .minilang import MiniLangError, format_env, parse_element
from .report import EXACT_ZERO, Check, Report
from .reps import (build_rep_5d, build_rep_so32, check_rep_exact,
                   finite_boost_14, make_sample_points, make_test_functions,
                   verify_relations)
from .scalars import Scalar
from .specfile import SpecFile, SpecFileError, load_specfile_path

USAGE_EXIT = 2
FAIL_EXIT = 1


def _spec_echo(spec_file: SpecFile, seed: int) -> dict:
    echo = {"signature": {"eps4": spec_file.signature.eps4,
                          "eps5": spec_file.signature.eps5},
            "regime": spec_file.regime}
    if spec_file.raw:
        echo["document"] = spec_file.raw
    return echo


# -- verify ------------------------------------------------------------------

def check_jacobi(spec: LieAlgebraSpec) -> Check:
    defects = jacobi_defect(spec)
    if not defects:
        return Check("jacobi_identity", "pass", EXACT_ZERO,
                     f"{len(spec.basis)} generators, all triples exact zero")
    names = [tuple(spec.gen_name(g) for g in triple)
             for triple, _ in defects[:10]]
    return Check("jacobi_identity", "fail", 1.0,
                 {"defective_triples": [list(t) for t in names],
                  "count": len(defects)})


def check_orthogonal_symbolic(sig: Signature) -> Check:
    full = build_deformed_algebra(sig, "full")
    so6 = build_so6_algebra(sig)
    ident = identify_orthogonal(sig)
    phi_locus = {"phi": Scalar.param("R_inv", 2, coeff=sig.eps5)}
    ids = sorted(full.basis)
    for a_pos, a in enumerate(ids):
        for b in ids[a_pos + 1:]:
            ka, sa = ident.to_mab(a)
            kb, sb = ident.to_mab(b)
            pushed = ident.mab_element_to_phys(
                so6.bracket_ids(ka, kb)).scale(sa * sb)
            direct = full.bracket_ids(a, b).map_scalars(
                lambda s: s.substitute(phi_locus))
            if not (pushed - direct).is_zero:
                return Check("orthogonal_realization_symbolic", "fail", 1.0,
                             f"mismatch at [{full.gen_name(a)},{full.gen_name(b)}]")
    return Check("orthogonal_realization_symbolic", "pass", EXACT_ZERO,
                 "so(eta6) table pushed through the identification matches "
                 "the full table with phi = eps5*R_inv^2")


def check_orthogonal_oracle(sig: Signature, tol: float = 1e-12) -> Check:
    full = build_deformed_algebra(sig, "full")
    rep = physical_rep(sig, ell=1.0, r_inv=0.5)
    env = {"ell": 1.0, "R_inv": 0.5, "phi": sig.eps5 * 0.25}
    worst = 0.0
    ids = sorted(full.basis)
    for a_pos, a in enumerate(ids):
        for b in ids[a_pos + 1:]:
            lhs = rep[a] @ rep[b] - rep[b] @ rep[a]
            rhs = element_matrix(full.bracket_ids(a, b), rep, env)
            worst = max(worst, float(np.abs(lhs - rhs).max()))
    status = "pass" if worst <= tol else "fail"
    return Check("orthogonal_realization_oracle", status, worst,
                 "105 brackets vs 6x6 matrix commutators at ell=1, R=2")


def check_contraction(sig: Signature) -> Check:
    full = build_deformed_algebra(sig, "full")
    tangent = build_deformed_algebra(sig, "tangent")
    ok = contract_tangent(full).table_equal(tangent)
    return Check("tangent_contraction", "pass" if ok else "fail",
                 EXACT_ZERO if ok else 1.0,
                 "R_inv -> 0 substitution equals the tangent table entry-for-entry")


def check_casimir_centrality(sig: Signature, kind: str,
                             spec: LieAlgebraSpec) -> Check:
    elem = casimir(kind, sig, spec)
    defects = centrality_defect(elem, spec)
    name = f"casimir_{kind.lower()}_centrality"
    if not defects:
        return Check(name, "pass", EXACT_ZERO,
                     f"[{kind}, g] = 0 for all 15 generators (symbolic)")
    return Check(name, "fail", 1.0,
                 {"noncommuting": [spec.gen_name(g) for g, _ in defects]})


def check_casimir_oracle(sig: Signature, kind: str, tol: float = 1e-10) -> Check:
    rep = defining_rep(sig)
    ident = identify_orthogonal(sig)
    full = build_deformed_algebra(sig, "full")
    elem = casimir(kind, sig, full)
    phys_rep_mats = {}
    env = {"ell": 1.0, "R_inv": 0.5}
    for gid in full.basis:
        k, s = ident.to_mab(gid)
        phys_rep_mats[gid] = complex(s.evaluate(env)) * rep[k]
    c_mat = elem.evaluate_matrix(phys_rep_mats, {**env, "phi": sig.eps5 * 0.25})
    worst = 0.0
    scale = max(1.0, float(np.abs(c_mat).max()))
    for m in rep.values():
        worst = max(worst, float(np.abs(c_mat @ m - m @ c_mat).max()) / scale)
    status = "pass" if worst <= tol else "fail"
    return Check(f"casimir_{kind.lower()}_centrality_oracle", status, worst,
                 "matrix image commutes with all defining-rep generators")


def check_d_squared(sig: Signature) -> Check:
    for regime in ("full", "tangent"):
        spec = build_deformed_algebra(sig, regime)
        derivs = derivation_set(regime, spec)
        for gid in spec.basis:
            one_form = differential_of_generator(gid, regime, spec, derivs)
            dd = exterior_derivative(one_form, regime, spec, derivs)
            if not dd.is_zero:
                return Check("d_squared_zero", "fail", 1.0,
                             f"d(d({spec.gen_name(gid)})) != 0 in {regime})")
    return Check("d_squared_zero", "pass", EXACT_ZERO,
                 "d(d(g)) = 0 for every generator, both regimes (exact)")


def check_worked_differentials(sig: Signature) -> Check:
    spec = build_deformed_algebra(sig, "full")
    derivs = derivation_set("full", spec)
    for mu in range(4):
        dx = differential_of_generator(X_IDS[mu], "full", spec, derivs)
        if not dx == reference_differential_x(mu, sig):
            return Check("worked_differentials", "fail", 1.0,
                         f"dx{mu} does not match the printed closed form")
        dp = differential_of_generator(P_IDS[mu], "full", spec, derivs)
        if not dp == reference_differential_p(mu, sig):
            return Check("worked_differentials", "fail", 1.0,
                         f"dp{mu} does not match the printed closed form")
    return Check("worked_differentials", "pass", EXACT_ZERO,
                 "dx^mu and dp^mu match the printed one-forms exactly")


def check_tangent_translation_sector(sig: Signature) -> Check:
    spec = build_deformed_algebra(sig, "tangent")
    entries = {}
    for mu in range(4):
        for nu in range(mu + 1, 4):
            entries[f"[p{mu},p{nu}]"] = format_env(
                EnvElement.from_algebra_element(
                    spec.bracket_ids(P_IDS[mu], P_IDS[nu])))
        entries[f"[p{mu},Im]"] = format_env(
            EnvElement.from_algebra_element(spec.bracket_ids(P_IDS[mu], IM)))
    ok = all(v == "0" for v in entries.values())
    entries["[x0,Im]"] = format_env(
        EnvElement.from_algebra_element(spec.bracket_ids(X_IDS[0], IM)))
    return Check("tangent_translation_sector", "pass" if ok else "fail",
                 EXACT_ZERO if ok else 1.0,
                 {"entries": entries,
                  "note": "the translation set {p, Im} is Abelian; [x, Im] "
                          "is retained (Jacobi identity requires it)"})


def cmd_verify(spec_file: SpecFile, args) -> Report:
    report = Report("verify", _spec_echo(spec_file, args.seed),
                    seed=args.seed, tolerance=args.tolerance)
    sig = spec_file.signature
    spec = spec_file.build()
    oracle_tol = args.tolerance if args.tolerance is not None else 1e-12
    casimir_tol = args.tolerance if args.tolerance is not None else 1e-10
    report.add(check_jacobi(spec))
    report.add(check_orthogonal_symbolic(sig))
    report.add(check_orthogonal_oracle(sig, oracle_tol))
    report.add(check_contraction(sig))
    clean_full = build_deformed_algebra(sig, "full")
    report.add(check_casimir_centrality(sig, "C1", clean_full))
    for kind in ("C2", "C3"):
        report.add(check_casimir_oracle(sig, kind, casimir_tol))
        if args.deep:
            report.add(check_casimir_centrality(sig, kind, clean_full))
        else:
            report.add(Check(f"casimir_{kind.lower()}_centrality", "skip",
                             EXACT_ZERO, "symbolic check runs under --deep"))
    report.add(check_d_squared(sig))
    report.add(check_worked_differentials(sig))
    if spec_file.regime == "tangent":
        report.add(check_tangent_translation_sector(sig))
    return report


# -- computations ------------------------------------------------------------

def cmd_commute(spec_file: SpecFile, args) -> Report:
    report = Report("commute", _spec_echo(spec_file, args.seed), seed=args.seed)
    spec = spec_file.build()
    a = parse_element(args.a, spec)
    b = parse_element(args.b, spec)
    result = env_commutator(a, b, spec)
    report.payload["commutator"] = format_env(result, spec.regime)
    report.add(Check("commute", "pass", EXACT_ZERO,
                     {"a": args.a, "b": args.b}))
    return report


def cmd_casimir(spec_file: SpecFile, args) -> Report:
    report = Report("casimir", _spec_echo(spec_file, args.seed), seed=args.seed)
    sig = spec_file.signature
    kind = f"C{args.which}"
    spec = build_deformed_algebra(sig, "full")
    elem = casimir(kind, sig, spec)
    report.payload["element"] = format_env(elem)
    report.payload["terms"] = len(elem.terms)
    report.add(check_casimir_oracle(sig, kind))
    if kind == "C1" or args.deep:
        report.add(check_casimir_centrality(sig, kind, spec))
    else:
        report.add(Check(f"casimir_{kind.lower()}_centrality", "skip",
                         EXACT_ZERO, "symbolic check runs under --deep"))
    return report


def cmd_diff(spec_file: SpecFile, args) -> Report:
    report = Report("diff", _spec_echo(spec_file, args.seed), seed=args.seed)
    if spec_file.regime == "spacetime":
        raise SpecFileError(
            "the derivation calculus is defined for the full and tangent "
            "regimes; pick one in the spec file")
    regime = spec_file.regime
    spec = build_deformed_algebra(spec_file.signature, regime)
    ids = {GEN_NAMES[g]: g for g in spec.basis}
    gid = ids.get(args.generator)
    if gid is None:
        raise MiniLangError(f"unknown generator {args.generator!r}", 0)
    form = differential_of_generator(gid, regime, spec)
    comps = {theta_name(lab[0]): format_env(val, regime)
             for lab, val in sorted(form.comps.items())}
    report.payload["differential"] = comps
    report.add(Check("differential", "pass", EXACT_ZERO,
                     f"d({args.generator}) in the {regime} regime"))
    return report


def cmd_curvature(spec_file: SpecFile, args) -> Report:
    report = Report("curvature", _spec_echo(spec_file, args.seed),
                    seed=args.seed)
    sig = spec_file.signature
    spec = build_deformed_algebra(sig, "full")
    if args.connection:
        import json
        with open(args.connection, "r", encoding="utf-8") as fh:
            comp_doc = json.load(fh)
        labels = derivation_labels("full")
        label_by_name = {theta_name(lab)[len("theta"):].lstrip("_"): lab
                         for lab in labels}
        comps = {}
        for key, text in comp_doc.items():
            lab = label_by_name.get(str(key).lstrip("_"))
            if lab is None:
                raise SpecFileError(f"unknown connection component {key!r}")
            comps[lab] = parse_element(text, spec)
        conn = Connection(comps, "full", spec)
    else:
        conn = Connection.zero("full", spec)
    report.payload["phi_term_sign"] = PHI_TERM_SIGN
    worst_exact = True
    for alpha_i in range(4):
        for beta_i in range(alpha_i + 1, 4):
            alpha, beta = P_IDS[alpha_i], P_IDS[beta_i]
            for mu in range(4):
                x = EnvElement.generator(X_IDS[mu])
                lhs = curvature_commutator(conn, x, alpha, beta)
                f = field_strength(conn, alpha, beta)
                expected = env_product(x, f, spec) \
                    + expected_phi_term(sig, mu, alpha_i, beta_i)
                if not (lhs - expected).is_zero:
                    worst_exact = False
    status = "pass" if worst_exact else "fail"
    report.add(Check("curvature_decomposition", status,
                     EXACT_ZERO if worst_exact else 1.0,
                     "commutator of covariant derivatives = x*(field strength) "
                     "+ phi term, all translation pairs and all x components"))
    zero_conn = Connection.zero("full", spec)
    sample = curvature_phi_part(
        EnvElement.generator(X_IDS[0]), P_IDS[0], P_IDS[1], zero_conn)
    report.payload["phi_term_on_x0_d0_d1"] = format_env(sample)
    return report


def cmd_clifford(spec_file: SpecFile, args) -> Report:
    report = Report("clifford", _spec_echo(spec_file, args.seed),
                    seed=args.seed)
    sig = spec_file.signature
    params = spec_file.finkelstein
    if params is None:
        from .clifford import FinkelsteinParams
        from .scalars import QQi
        from fractions import Fraction
        params = FinkelsteinParams(3, QQi(Fraction(1, 2)),
                                   QQi(Fraction(1, 2)))
    holds = params.constraint_holds()
    report.payload["constraint"] = {
        "n_cells": params.n_cells,
        "holds": holds,
        "statement": "chi*phi_cell*(N-1) = hbar/2",
    }
    if params.enforce_constraint and not holds:
        report.add(Check("cell_constraint", "fail", 1.0,
                         "chi*phi_cell*(N-1) != hbar/2"))
        return report
    report.add(Check("cell_constraint", "pass", EXACT_ZERO,
                     "constraint satisfied" if holds else
                     "constraint not enforced"))
    rows = closure_report(params, sig)
    worst = max(r[3] for r in rows)
    table = []
    for name_a, name_b, matches, residual in rows:
        table.append({
            "commutator": f"[{name_a},{name_b}]",
            "matches": [[n, c] for n, c in matches],
            "residual": residual,
        })
    report.payload["closure"] = table
    status = "pass" if worst <= 1e-10 else "fail"
    report.add(Check("cell_closure", status, worst,
                     "every family commutator lies in the family span"))
    return report


def cmd_rep(spec_file: SpecFile, args) -> Report:
    report = Report(f"rep-{args.which}", _spec_echo(spec_file, args.seed),
                    seed=args.seed)
    sig = spec_file.signature
    if args.which == "5d":
        rep = build_rep_5d(sig)
        target = build_deformed_algebra(sig, "tangent")
        bad = check_rep_exact(rep, target)
        status = "pass" if not bad else "fail"
        report.add(Check("rep_5d_brackets", status,
                         EXACT_ZERO if not bad else 1.0,
                         "all 105 brackets hold as exact operator identities"))
        return report
    cfg = spec_file.rep
    tolerance = args.tolerance if args.tolerance is not None else cfg.tolerance
    rep = build_rep_so32(cfg.sigma, cfg.epsilon)
    target = build_deformed_algebra(Signature(1, sig.eps5), "spacetime")
    seed = args.seed if args.seed else cfg.seed
    points = make_sample_points(seed, cfg.samples)
    funcs = make_test_functions(seed)
    residuals = verify_relations(rep, target, points, funcs)
    worst = max(residuals.values())
    status = "pass" if worst <= tolerance else "fail"
    report.add(Check("rep_so32_brackets", status, worst,
                     f"45 generator pairs, {len(points)} points, "
                     f"{len(funcs)} test functions, sigma={cfg.sigma}"))
    # finite boost: identity at t=0 and the one-parameter group law
    f = funcs[0]
    def fc(p1, p2, th):
        return f.evaluate({"phi1": p1, "phi2": p2, "theta1": th})
    worst_id = 0.0
    ident_boost = finite_boost_14(0.0, cfg.sigma, fc)
    for pt in points[:20]:
        a = ident_boost(pt["phi1"], pt["phi2"], pt["theta1"])
        b = fc(pt["phi1"], pt["phi2"], pt["theta1"])
        worst_id = max(worst_id, abs(a - b))
    report.add(Check("boost_identity_at_zero",
                     "pass" if worst_id == 0.0 else "fail", worst_id,
                     "t = 0 acts as the identity"))
    t1, t2 = 0.4, -0.75
    lhs = finite_boost_14(t1, cfg.sigma,
                          lambda *a: finite_boost_14(t2, cfg.sigma, fc)(*a))
    rhs = finite_boost_14(t1 + t2, cfg.sigma, fc)
    worst_gl = 0.0
    for pt in points[:20]:
        worst_gl = max(worst_gl, abs(
            lhs(pt["phi1"], pt["phi2"], pt["theta1"])
            - rhs(pt["phi1"], pt["phi2"], pt["theta1"])))
    report.add(Check("boost_group_law", "pass" if worst_gl <= 1e-8 else "fail",
                     worst_gl, "t then t' equals t + t'"))
    report.payload["boost_generator"] = {
        "matches": "-i*X1",
        "exponent_note": "multiplier uses |a|^(sigma/2): the generator match "
                         "holds with sigma replaced by sigma/2 relative to "
                         "the degree-sigma homogeneity convention",
    }
    return report


# -- entry point ---------------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ncst",
        description="exact computer algebra for the stable deformed "
                    "space-time algebra and its noncommutative geometry")
    parser.add_argument("--spec", help="path to a JSON algebra-spec file")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--tolerance", type=float, default=None)
    parser.add_argument("--json", dest="json_out",
                        help="also write the report to this path")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="run the verification suite")
    p.add_argument("--deep", action="store_true",
                   help="include the symbolic C2/C3 centrality checks")

    p = sub.add_parser("commute", help="canonical commutator of two elements")
    p.add_argument("a")
    p.add_argument("b")

    p = sub.add_parser("casimir", help="invariant elements")
    p.add_argument("which", type=int, choices=(1, 2, 3))
    p.add_argument("--deep", action="store_true")

    p = sub.add_parser("diff", help="differential of a generator")
    p.add_argument("generator")

    p = sub.add_parser("curvature", help="curvature commutator decomposition")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--zero", action="store_true",
                       help="use the zero connection")
    group.add_argument("--connection", help="JSON file of components")

    sub.add_parser("clifford", help="cell construction closure report")

    p = sub.add_parser("rep", help="representation checks")
    p.add_argument("which", choices=("5d", "so32"))

    return parser


_DISPATCH = {
    "verify": cmd_verify,
    "commute": cmd_commute,
    "casimir": cmd_casimir,
    "diff": cmd_diff,
    "curvature": cmd_curvature,
    "clifford": cmd_clifford,
    "rep": cmd_rep,
}


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.spec:
            spec_file = load_specfile_path(args.spec)
        else:
            spec_file = SpecFile()
    except (SpecFileError, OSError, ValueError) as exc:
        print(f"ncst: spec error: {exc}", file=sys.stderr)
        return USAGE_EXIT
    try:
        report = _DISPATCH[args.command](spec_file, args)
    except (MiniLangError, SpecFileError, UnsupportedInverseError) as exc:
        print(f"ncst: {exc}", file=sys.stderr)
        return USAGE_EXIT
    except (ConstraintViolation, ResourceBudgetError) as exc:
        print(f"ncst: {exc}", file=sys.stderr)
        return FAIL_EXIT
    text = report.dumps()
    sys.stdout.write(text)
    if args.json_out:
        with open(args.json_out, "w", encoding="utf-8") as fh:
            fh.write(text)
    return FAIL_EXIT if report.failed else 0


if __name__ == "__main__":
    sys.exit(main())
