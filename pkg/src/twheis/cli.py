"""Command-line interface: ``twheis <command> --field F --m M --lambda L [...]``.

Exit codes: 0 success, 1 mathematical precondition failure, 2 parse error,
3 internal invariant violation.  Output depends only on the arguments and
``--seed``.  ``--out FILE`` writes the output to FILE instead of stdout; a
relative FILE is placed under ``$TWHEIS_OUTPUT_DIR`` when that is set.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import cohomology as co
from . import extensions as ex
from . import heisenberg as hb
from . import linalg as la
from . import restricted as rs
from .field import FiniteField, ParseError, parse_field
from .liealg import algebra_to_json, jacobson_restrictable, verify_pmap

EXIT_OK, EXIT_MATH, EXIT_PARSE, EXIT_INTERNAL = 0, 1, 2, 3
NOT_RESTRICTABLE = "not restrictable (p>2 and equal λ^{p-1} required)"


class InvariantViolation(RuntimeError):
    """A computed identity that must hold did not."""


class PreconditionFailure(ValueError):
    """A well-formed request whose mathematical answer is negative."""


@dataclass
class RunConfig:
    command: str
    field: FiniteField
    m: int
    lam: np.ndarray
    mu: np.ndarray | None
    seed: int
    json: bool
    args: argparse.Namespace

    @property
    def params(self) -> hb.TwistedParams:
        return hb.TwistedParams.make(self.field, self.m, self.lam, self.mu)


def parse_elements(F: FiniteField, text: str) -> np.ndarray:
    """Comma-separated field elements; parse errors report the column in ``text``."""
    out, offset = [], 0
    for part in text.split(","):
        try:
            out.append(F.parse(part))
        except ParseError as exc:
            raise ParseError(str(exc).split(" at position")[0], text, offset + exc.pos) from None
        offset += len(part) + 1
    return np.array(out, dtype=np.int64)


def _fmt_list(F: FiniteField, v) -> str:
    return ",".join(F.format(c) for c in v)


def _header(cfg: RunConfig) -> str:
    F = cfg.field
    s = f"field GF({F.q}) [{F.spec_string()}], m = {cfg.m}, lambda = ({_fmt_list(F, cfg.lam)})"
    if cfg.mu is not None:
        s += f", mu = ({_fmt_list(F, cfg.mu)})"
    return s


def _sparse2(F: FiniteField, n: int, v) -> list:
    return [[i + 1, j + 1, F.format(c)] for (i, j), c in zip(co.pairs(n), v) if c]


# -- commands -------------------------------------------------------------------

def cmd_cohomology(cfg: RunConfig):
    F, m = cfg.field, cfg.m
    L = hb.make_twisted(F, m, cfg.lam)
    q = cfg.args.q
    res = co.ce_cohomology(L, q)
    if q == 2:
        expected = co.h2_dimension_formula(F, m, cfg.lam)
        if res.dim != expected:
            raise InvariantViolation(f"dim H^2 = {res.dim} but the closed formula gives {expected}")
    elif q == 1 and res.dim != 1:
        raise InvariantViolation(f"dim H^1 = {res.dim}, expected 1")
    if cfg.json:
        reps = [_sparse2(F, L.n, r) if q == 2 else
                [[k + 1, F.format(c)] for k, c in enumerate(r) if c] for r in res.representatives]
        return {"field": F.spec_string(), "m": m, "lambda": [F.format(c) for c in cfg.lam],
                "q": q, "dim": res.dim, "representatives": reps}
    lines = [_header(cfg), f"dim H^{q} = {res.dim}"]
    lines += [f"  {co.format_cochain(F, L.n, r, q)}" for r in res.representatives]
    return lines


def cmd_restricted(cfg: RunConfig):
    F, params = cfg.field, cfg.params
    L, P = hb.restricted_from_params(params)
    q = cfg.args.q
    res = rs.restricted_cohomology(L, P, q)
    if q == 2:
        expected = 2 * hb.coincidence_card(F, params.lam) + 3 * cfg.m
        if res.dim != expected:
            raise InvariantViolation(f"dim H^2_* = {res.dim} but the closed formula gives {expected}")
    elif res.dim != 0:
        raise InvariantViolation(f"dim H^1_* = {res.dim}, expected 0")
    n = L.n
    npairs = len(co.pairs(n))
    if cfg.json:
        if q == 1:
            reps = [[[k + 1, F.format(c)] for k, c in enumerate(r) if c] for r in res.representatives]
        else:
            reps = [{"phi": _sparse2(F, n, r[:npairs]),
                     "omega_basis": [[k + 1, F.format(c)] for k, c in enumerate(r[npairs:]) if c]}
                    for r in res.representatives]
        return {"field": F.spec_string(), "m": cfg.m, "lambda": [F.format(c) for c in params.lam],
                "mu": [F.format(c) for c in params.mu], "q": q, "dim": res.dim,
                "representatives": reps}
    lines = [_header(cfg), f"dim H^{q}_* = {res.dim}"]
    for r in res.representatives:
        lines.append("  " + (co.format_cochain(F, n, r, 1) if q == 1
                             else rs.format_star_class(F, n, r)))
    return lines


def cmd_restrictable(cfg: RunConfig):
    F, m = cfg.field, cfg.m
    L = hb.make_twisted(F, m, cfg.lam)
    ok, witnesses = jacobson_restrictable(L)
    if ok != hb.restrictable_predicate(F, cfg.lam):
        raise InvariantViolation("Jacobson systems disagree with the restrictability criterion")
    if not ok:
        raise PreconditionFailure(NOT_RESTRICTABLE)
    params = hb.TwistedParams.make(F, m, cfg.lam)
    if cfg.json:
        return {"field": F.spec_string(), "m": m, "restrictable": True,
                "abs_lambda": F.format(params.abs_lambda)}
    return [_header(cfg), "restrictable", f"|lambda| = {F.format(params.abs_lambda)}",
            f"e{2 * m + 2}^[p] = |lambda| e{2 * m + 2} + mu_{2 * m + 2} e{2 * m + 1};"
            f" e_i^[p] = mu_i e{2 * m + 1} otherwise"]


def cmd_extend(cfg: RunConfig):
    a = cfg.args
    params = cfg.params
    E = ex.build_family(params, a.family, a.i, a.j)
    rep = ex.verify_extension(E, trials=200, seed=cfg.seed)
    if not rep.ok:
        raise InvariantViolation("; ".join(rep.failures))
    F, n = cfg.field, params.n
    out = algebra_to_json(E.algebra, E.pmap)
    out["extension"] = {"family": a.family, "name": E.name, "central": n + 1,
                        "phi": _sparse2(F, n, E.phi),
                        "omega_basis": [[k + 1, F.format(c)] for k, c in enumerate(E.omega_basis) if c]}
    return out


def _iso_candidate(cfg: RunConfig):
    a, params, F = cfg.args, cfg.params, cfg.field
    if a.swap:
        return hb.swap_automorphism(params)
    if a.scale is not None:
        return hb.scaling_automorphism(params, F.parse(a.scale))
    if a.A is None or a.k is None or a.mu2 is None:
        raise PreconditionFailure("iso-check needs --swap, --scale ALPHA, or all of --A, --k, --mu2")
    rows = [parse_elements(F, r) for r in a.A.split(";")]
    cand = hb.IsoCandidate.make(F, rows, parse_elements(F, a.k))
    return cand, params.with_mu(parse_elements(F, a.mu2))


def cmd_iso_check(cfg: RunConfig):
    F, params = cfg.field, cfg.params
    cand, params2 = _iso_candidate(cfg)
    rep = hb.iso_conditions_check(params, params2, cand, seed=cfg.seed)
    if not rep.consistent:
        raise InvariantViolation("isomorphism conditions disagree with the direct morphism check")
    mode = "all tuples" if rep.exhaustive else "seeded sample"
    if cfg.json:
        result = {"mu2": [F.format(c) for c in params2.mu],
                  "conditions": {str(k): v for k, v in sorted(rep.conditions.items())},
                  "witnesses": {str(k): v for k, v in sorted(rep.witnesses.items())},
                  "morphism": rep.morphism, "tuples_checked": rep.tuples_checked,
                  "exhaustive": rep.exhaustive, "isomorphism": rep.ok}
    else:
        result = [_header(cfg), f"target mu = ({_fmt_list(F, params2.mu)})"]
        for k, v in sorted(rep.conditions.items()):
            extra = f"  [{rep.witnesses[k]}]" if k in rep.witnesses else ""
            result.append(f"condition {k}: {'pass' if v else 'FAIL'}{extra}")
        result.append(f"direct restricted-morphism check: {'pass' if rep.morphism else 'FAIL'}"
                      f" ({rep.tuples_checked} tuples, {mode})")
        result.append("isomorphism" if rep.ok else "not an isomorphism")
    if not rep.ok:
        raise PreconditionFailure(result)
    return result


def verify_suite(params: hb.TwistedParams, seed: int = 0, trials: int = 200) -> list[tuple[str, bool, str]]:
    """Run every invariant for one parameter set; returns (name, ok, detail) rows."""
    F, m = params.field, params.m
    rng = np.random.default_rng(seed)
    rows: list[tuple[str, bool, str]] = []

    def record(name, ok, detail=""):
        rows.append((name, bool(ok), detail))

    L = hb.make_twisted(F, m, params.lam)
    h1, h2 = co.ce_cohomology(L, 1).dim, co.ce_cohomology(L, 2).dim
    record("dim H^1 = 1", h1 == 1, f"got {h1}")
    exp2 = co.h2_dimension_formula(F, m, params.lam)
    record("dim H^2 = 2 Card + m - 1", h2 == exp2, f"got {h2}, formula {exp2}")
    record("d^2 d^1 = 0", not la.matmul(F, co.d2_matrix(L), co.d1_matrix(L)).any())
    Z = co.h2_basis_cocycles(F, m, params.lam)
    coh2 = co.ce_cohomology(L, 2)
    indep = (not la.matmul(F, co.d2_matrix(L), Z.T).any()
             and la.rank(F, np.vstack([coh2.image.basis, Z])) == coh2.image.dim + Z.shape[0])
    record("explicit H^2 cocycles form a basis", indep and Z.shape[0] == h2)
    for k in (1, 2):
        hs = co.hs_dimension_check(F, m, params.lam, k)
        record(f"invariants + coinvariants, k = {k}", hs.ok,
               f"{hs.total} vs {hs.invariants} + {hs.coinvariants}")

    restrictable = hb.restrictable_predicate(F, params.lam)
    jac, _ = jacobson_restrictable(L)
    record("Jacobson test matches restrictability criterion", jac == restrictable)
    if not restrictable:
        return rows

    Lr, P = hb.restricted_from_params(params)
    pm = verify_pmap(P, trials=min(trials, 100), seed=seed)
    record("restricted axioms", pm.ok, "; ".join(pm.failures))
    G = Lr.random_elements(rng, trials)
    record("closed-form p-map = axiomatic extension",
           np.array_equal(hb.closed_form_p(params, G), P(G)))
    s1, s2 = rs.restricted_cohomology(Lr, P, 1).dim, rs.restricted_cohomology(Lr, P, 2).dim
    record("dim H^1_* = 0", s1 == 0, f"got {s1}")
    exp_s2 = 2 * hb.coincidence_card(F, params.lam) + 3 * m
    record("dim H^2_* = 2 Card + 3m", s2 == exp_s2, f"got {s2}, formula {exp_s2}")
    record("d^2_* d^1_* = 0",
           not la.matmul(F, rs.d2star_matrix(Lr, P), rs.d1star_matrix(Lr, P)).any())
    record("class list independent in H^2_*",
           rs.classes_independent(Lr, P, rs.restricted_h2_classes(params)))
    six = rs.six_term_check(Lr, P, m=m, trials=max(trials // 2, 100), seed=seed)
    record("six-term identities and swap property", six.ok, "; ".join(six.failures))
    top = np.zeros((trials, Lr.n), dtype=np.int64)
    top[:, Lr.n - 1] = 1
    zero_delta = all(not rs.delta_eval(P, z, G, top).any() for z in Z)
    record("Delta_phi(g).e_{2m+2} = 0", zero_delta)
    tilde_ok = True
    for s in range(1, 2 * m + 1):
        for t in range(s + 1, 2 * m + 1):
            phi = co.cochain2(F, Lr.n, {(s, t): 1})
            val = rs.compatible_eval(Lr, phi, np.zeros(Lr.n, np.int64), G, peel="right")
            tilde_ok &= np.array_equal(val, rs.tilde_closed_form(F, m, params.lam, s, t, G))
    record("tilde closed form = compatible map", tilde_ok)
    fam_fail = []
    for E in ex.family_instances(params):
        rep = ex.verify_extension(E, trials=trials, seed=seed)
        if not rep.ok:
            fam_fail.append(f"{E.name}: {rep.failures[0]}")
    record("extension families", not fam_fail, "; ".join(fam_fail))
    iso_ok = all(ex.cohomologous_isomorphism(Lr, P, x, F.random(rng, Lr.n))[3]
                 for x in rs.restricted_h2_classes(params))
    record("cohomologous cocycles give isomorphic extensions", iso_ok)
    return rows


def cmd_verify(cfg: RunConfig):
    rows = verify_suite(cfg.params, seed=cfg.seed)
    failed = [r for r in rows if not r[1]]
    if cfg.json:
        out = {"checks": [{"name": n, "ok": ok, "detail": d} for n, ok, d in rows],
               "ok": not failed}
    else:
        out = [_header(cfg)]
        out += [f"{'PASS' if ok else 'FAIL'}  {n}" + (f"  ({d})" if d and not ok else "")
                for n, ok, d in rows]
        out.append(f"{len(rows) - len(failed)}/{len(rows)} checks passed")
    if failed:
        raise InvariantViolation(out)
    return out


COMMANDS = {
    "cohomology": cmd_cohomology,
    "restricted-cohomology": cmd_restricted,
    "restrictable": cmd_restrictable,
    "extend": cmd_extend,
    "iso-check": cmd_iso_check,
    "verify": cmd_verify,
}


# -- plumbing -------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="twheis", description="Cohomology and restricted structures of twisted Heisenberg algebras.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--field", required=True, help='"p", "p^k" or "p^k:c0,...,ck"')
    common.add_argument("--m", type=int, required=True)
    common.add_argument("--lambda", dest="lam", required=True, help="comma-separated nonzero elements")
    common.add_argument("--mu", help="comma-separated 2m+2 elements (default all zero)")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--json", action="store_true")
    common.add_argument("--out", help="write output to this file")
    sub = parser.add_subparsers(dest="command", required=True)

    for name in ("cohomology", "restricted-cohomology"):
        sp = sub.add_parser(name, parents=[common])
        sp.add_argument("--q", type=int, choices=(1, 2), required=True)
    sub.add_parser("restrictable", parents=[common])
    sp = sub.add_parser("extend", parents=[common])
    sp.add_argument("--family", choices=sorted(ex.FAMILIES), required=True)
    sp.add_argument("--i", type=int, required=True)
    sp.add_argument("--j", type=int)
    sp = sub.add_parser("iso-check", parents=[common])
    sp.add_argument("--swap", action="store_true", help="exchange e_i and e_{m+i}")
    sp.add_argument("--scale", help="scale e_1..e_2m by ALPHA")
    sp.add_argument("--A", help="rows of A separated by ';', entries by ','")
    sp.add_argument("--k", help="comma-separated k_1..k_{2m+2}")
    sp.add_argument("--mu2", help="mu of the target structure")
    sub.add_parser("verify", parents=[common])
    return parser


def _render(result, as_json: bool) -> str:
    if isinstance(result, dict):
        return json.dumps(result, ensure_ascii=False) + "\n"
    return "\n".join(result) + "\n"


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
        return
    path = Path(out)
    base = os.environ.get("TWHEIS_OUTPUT_DIR")
    if base and not path.is_absolute():
        path = Path(base) / path
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")


def make_config(args: argparse.Namespace) -> RunConfig:
    F = parse_field(args.field)
    lam = parse_elements(F, args.lam)
    mu = parse_elements(F, args.mu) if args.mu is not None else None
    return RunConfig(args.command, F, args.m, lam, mu, args.seed, args.json, args)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = make_config(args)
        if cfg.command in ("cohomology", "restrictable"):
            hb.make_twisted(cfg.field, cfg.m, cfg.lam)  # validate lambda early
        _emit(_render(COMMANDS[cfg.command](cfg), cfg.json), args.out)
        return EXIT_OK
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except InvariantViolation as exc:
        payload = exc.args[0]
        if isinstance(payload, (list, dict)):
            _emit(_render(payload, cfg.json), args.out)
        print(f"invariant violation: {payload if isinstance(payload, str) else 'see report'}",
              file=sys.stderr)
        return EXIT_INTERNAL
    except PreconditionFailure as exc:
        payload = exc.args[0]
        if isinstance(payload, (list, dict)):
            _emit(_render(payload, cfg.json), args.out)
        else:
            _emit(payload + "\n", args.out)
        return EXIT_MATH
    except (ValueError, ZeroDivisionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MATH
    except ArithmeticError as exc:
        print(f"invariant violation: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
