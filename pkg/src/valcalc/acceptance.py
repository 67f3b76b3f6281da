"""Acceptance harness: reruns every acceptance criterion and reports.

Each check is deterministic given the seed.  The report body contains no
timings unless asked for, so two runs with the same seed and config
serialise to identical bytes.
"""

from __future__ import annotations

import dataclasses
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations_with_replacement, permutations
from math import comb
from typing import Callable

from . import __version__
from .char_cycle import antipodal, cc, chain_equal, combine_chains
from .config import Config, get_config, using_config
from .constructible import (
    boundary_indicator,
    combine,
    euler_integral,
    indicator,
    open_indicator,
    support_codim,
    verdier_dual,
)
from .intrinsic import intrinsic_volume
from .io import chain_to_json, function_to_json, polytope_to_json, rat, valuation_to_json
from .linalg import fraction_rank
from .minkowski import minkowski_polynomial, mixed_volume, weighted_volume
from .polytope import Polytope, box, segment, volume
from .suite import (
    heldout_bodies,
    homogeneous_suite,
    random_complex,
    random_degree_one,
    random_function,
    random_polytope,
    random_valuation,
    random_weight,
    suite_functions,
    suite_valuations,
    testset,
)
from .valuations import (
    evaluate,
    evaluate_constructible,
    euler_valuation,
    pairing_matrix,
    product_components,
    product_eval,
    sigma_boundary,
    sigma_boundary_eval,
    sigma_reflect,
    volume_valuation,
)

CRITERIA = {
    "AC-1": "filtration x product: low-degree components of products of degree-1 valuations vanish",
    "AC-2": "nilpotency: triple products of degree-1 valuations in the plane vanish",
    "AC-3": "top-degree component of a product is a constant multiple of volume",
    "AC-4": "the involution is an algebra automorphism and squares to the identity",
    "AC-5": "involution by reflected bodies agrees with involution through the boundary",
    "AC-6": "characteristic cycle of the Verdier dual equals the antipodal cycle",
    "AC-7": "duality transport <Df, phi> = <f, sigma phi>",
    "AC-8": "pairing with chi is the Euler integral",
    "AC-9": "support codimension versus homogeneity degree orthogonality",
    "AC-10": "evaluation pairing rank equals the dimension of the valuation span",
    "AC-11": "fitted Minkowski polynomials are exact out of sample",
    "AC-12": "mixed volume sanity",
    "AC-13": "intrinsic volumes of cubes and top-degree volume",
}


@dataclass
class CheckRecord:
    id: str
    property: str
    passed: bool
    witness: dict
    runtime_ms: float = 0.0

    def to_json(self, timings: bool = False) -> dict:
        out = {"id": self.id, "property": self.property, "status": "pass" if self.passed else "fail", "witness": self.witness}
        if timings:
            out["runtime_ms"] = round(self.runtime_ms, 1)
        return out


@dataclass
class RunReport:
    version: str
    seed: int
    config: dict
    checks: list[CheckRecord] = field(default_factory=list)

    @property
    def passed(self) -> int:
        return sum(c.passed for c in self.checks)

    @property
    def failed(self) -> int:
        return len(self.checks) - self.passed

    def check(self, cid: str) -> CheckRecord:
        return next(c for c in self.checks if c.id == cid)

    def to_json(self, timings: bool = False) -> dict:
        return {
            "version": self.version,
            "seed": self.seed,
            "config": self.config,
            "checks": [c.to_json(timings) for c in self.checks],
            "summary": {"passed": self.passed, "failed": self.failed, "total": len(self.checks)},
        }

    def lines(self) -> list[str]:
        return [f"{c.id:6s} {'PASS' if c.passed else 'FAIL'}  {c.property}" for c in self.checks]


class _Fail(Exception):
    def __init__(self, witness: dict):
        super().__init__(str(witness))
        self.witness = witness


def _expect(ok: bool, **witness) -> None:
    if not ok:
        raise _Fail({k: _jsonable(v) for k, v in witness.items()})


def _jsonable(v):
    if isinstance(v, Fraction):
        return rat(v)
    if isinstance(v, Polytope):
        return polytope_to_json(v)
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, (int, float, str, bool)) or v is None:
        return v
    if hasattr(v, "terms") and hasattr(v, "ambient_dim") and not hasattr(v, "variables"):
        return valuation_to_json(v)
    if hasattr(v, "coeffs") and hasattr(v, "complex"):
        return function_to_json(v)
    if hasattr(v, "pieces"):
        return chain_to_json(v)
    return repr(v)


class _Context:
    """Shared data between checks (AC-3 reuses the products of AC-1)."""

    def __init__(self, seed: int):
        self.seed = seed
        self.ac1_ratios: list[dict] | None = None

    def rng(self, tag: str) -> random.Random:
        return random.Random(f"{self.seed}:{tag}")


def _ac1(ctx: _Context) -> dict:
    rng = ctx.rng("AC-1")
    bodies = testset(2)
    ratios = []
    for pair in range(10):
        phi, psi = random_degree_one(rng), random_degree_one(rng)
        per_body = []
        for K in bodies:
            comps = product_components([phi, psi], K)
            _expect(all(c == 0 for c in comps[:2]), pair=pair, phi=phi, psi=psi, body=K, components=comps)
            per_body.append((K, comps))
        ratios.append({"phi": phi, "psi": psi, "data": per_body})
    ctx.ac1_ratios = ratios
    return {"pairs": 10, "bodies": len(bodies)}


def _ac2(ctx: _Context) -> dict:
    vals = suite_valuations(2)
    deg1 = [vals["phi_S1"], vals["phi_S2"], vals["phi_T"]]
    bodies = testset(2)[:5]
    count = 0
    for triple in combinations_with_replacement(range(len(deg1)), 3):
        for K in bodies:
            v = product_eval([deg1[i] for i in triple], K)
            _expect(v == 0, triple=list(triple), body=K, value=v)
            count += 1
    return {"evaluations": count}


def _ac3(ctx: _Context) -> dict:
    if ctx.ac1_ratios is None:
        _ac1(ctx)
    constants = []
    for idx, entry in enumerate(ctx.ac1_ratios):
        c = None
        for K, comps in entry["data"]:
            r = comps[2] / volume(K)
            if c is None:
                c = r
            _expect(r == c, pair=idx, body=K, ratio=r, expected=c)
        constants.append(c)
    return {"constants": [rat(c) for c in constants]}


def _ac4(ctx: _Context) -> dict:
    rng = ctx.rng("AC-4")
    bodies = testset(2)[:5]
    for pair in range(5):
        phi = random_valuation(rng, 2, max_terms=2)
        psi = random_valuation(rng, 2, max_terms=2)
        sphi, spsi = sigma_reflect(phi), sigma_reflect(psi)
        for K in bodies:
            lhs = sigma_boundary(lambda G: product_eval([phi, psi], G), K)
            rhs = product_eval([sphi, spsi], K)
            _expect(lhs == rhs, pair=pair, phi=phi, psi=psi, body=K, lhs=lhs, rhs=rhs)
    for name, phi in suite_valuations(2).items():
        _expect(sigma_reflect(sigma_reflect(phi)) == phi, valuation=name)
        for K in testset(2):
            twice = sigma_boundary(lambda G: sigma_boundary_eval(phi, G), K)
            _expect(twice == evaluate(phi, K), valuation=name, body=K, twice=twice)
    return {"pairs": 5, "bodies": len(bodies)}


def _ac5(ctx: _Context) -> dict:
    rng = ctx.rng("AC-5")
    for n in (1, 2, 3):
        for i in range(10):
            phi = random_valuation(rng, n, max_terms=2)
            P = random_polytope(rng, n, dim=rng.randint(0, n))
            a = sigma_boundary_eval(phi, P)
            b = evaluate(sigma_reflect(phi), P)
            _expect(a == b, n=n, instance=i, phi=phi, body=P, boundary_route=a, reflect_route=b)
        chi, vol = euler_valuation(n), volume_valuation(n)
        for K in testset(n):
            for route, v in (("boundary", sigma_boundary_eval(chi, K)), ("reflect", evaluate(sigma_reflect(chi), K))):
                _expect(v == 1, subcase="sigma chi = chi", n=n, route=route, body=K, value=v)
            want = (-1) ** n * volume(K)
            for route, v in (("boundary", sigma_boundary_eval(vol, K)), ("reflect", evaluate(sigma_reflect(vol), K))):
                _expect(v == want, subcase="sigma vol = (-1)^n vol", n=n, route=route, body=K, value=v)
    return {"instances_per_dim": 10}


def _ac6(ctx: _Context) -> dict:
    rng = ctx.rng("AC-6")
    tested = 0
    for n in (1, 2):
        for k in range(10):
            cx = random_complex(rng, n)
            for cell in cx.cells:
                for kind, f in (("open", open_indicator(cell)), ("closed", indicator(cell))):
                    lhs = cc(verdier_dual(f))
                    rhs = antipodal(cc(f))
                    if not chain_equal(lhs, rhs):
                        _expect(
                            False, n=n, complex=k, cell=cell, kind=kind,
                            difference=combine_chains([lhs, rhs], [1, -1]),
                        )
                    tested += 1
    return {"functions": tested}


def _ac7(ctx: _Context) -> dict:
    rng = ctx.rng("AC-7")
    for n in (1, 2):
        for i in range(10):
            f = random_function(rng, n)
            phi = random_valuation(rng, n, max_terms=2)
            lhs = evaluate_constructible(phi, verdier_dual(f))
            rhs = evaluate_constructible(sigma_reflect(phi), f)
            _expect(lhs == rhs, n=n, instance=i, f=f, phi=phi, lhs=lhs, rhs=rhs)
    return {"instances_per_dim": 10}


def _ac8(ctx: _Context) -> dict:
    rng = ctx.rng("AC-8")
    for i in range(25):
        n = (1, 2, 2, 3)[i % 4]
        f = random_function(rng, n, pieces=1 if n == 3 else 2)
        a = evaluate_constructible(euler_valuation(n), f)
        b = euler_integral(f)
        _expect(a == b, instance=i, f=f, pairing=a, euler_integral=b)
    for n in (1, 2, 3):
        for K in testset(n):
            _expect(euler_integral(indicator(K)) == 1, body=K)
            _expect(evaluate(euler_valuation(n), K) == 1, body=K)
    cube = box([0, 0, 0], [1, 1, 1])
    d = boundary_indicator(cube)
    e1, e2 = euler_integral(d), evaluate_constructible(euler_valuation(3), d)
    _expect(e1 == 2 and e2 == 2, subcase="boundary of the 3-cube", euler_integral=e1, pairing=e2)
    return {"random_functions": 25}


def _ac9(ctx: _Context) -> dict:
    rng = ctx.rng("AC-9")
    checked = 0
    for n in (2, 3):
        suite = homogeneous_suite(n, rng)
        for i in range(n + 1):
            P = random_polytope(rng, n, dim=n - i)
            fs = [indicator(P)]
            if n - i > 0:
                Q = random_polytope(rng, n, dim=rng.randint(0, n - i - 1))
                fs.append(indicator(Q))
            f = combine(fs, [1] + [Fraction(1, 2)] * (len(fs) - 1))
            _expect(support_codim(f) == i, n=n, codim=i, f=f, got=support_codim(f))
            nonzero = False
            for d, vals in suite.items():
                for psi in vals:
                    v = evaluate_constructible(psi, f)
                    if d > n - i:
                        _expect(v == 0, n=n, codim=i, degree=d, f=f, psi=psi, value=v)
                    elif d == n - i and v != 0:
                        nonzero = True
                    checked += 1
            _expect(nonzero, n=n, codim=i, f=f, reason="no degree n-i valuation pairs nonzero")
    return {"pairings": checked}


def _ac10(ctx: _Context) -> dict:
    rng = ctx.rng("AC-10")
    vals = suite_valuations(2)
    funcs = suite_functions(2)
    M = pairing_matrix(list(vals.values()), list(funcs.values()))
    held = heldout_bodies(2, 30, rng)
    oracle = fraction_rank([[evaluate(phi, K) for K in held] for phi in vals.values()])
    _expect(M.rank == oracle, pairing_rank=M.rank, span_dimension=oracle, matrix=[list(r) for r in M.entries])
    return {"rank": M.rank, "span_dimension": oracle, "matrix": [[rat(x) for x in r] for r in M.entries]}


def _ac11(ctx: _Context) -> dict:
    rng = ctx.rng("AC-11")
    for i in range(20):
        n = rng.randint(1, 3)
        s = rng.randint(1, 3)
        wdeg = rng.randint(0, 2)
        bodies = [random_polytope(rng, n, dim=rng.randint(0, n), npts=n + 1) for _ in range(s)]
        w = random_weight(rng, n, wdeg)
        p = minkowski_polynomial(bodies, w)
        for _ in range(5):
            lam = [Fraction(rng.randint(1, 40), rng.choice([3, 7, 11])) for _ in range(s)]
            want = weighted_volume(bodies, lam, w)
            got = p(*lam)
            _expect(got == want, instance=i, bodies=bodies, weight=str(w), lam=lam, fitted=got, direct=want)
    return {"instances": 20, "points_each": 5}


def _ac12(ctx: _Context) -> dict:
    rng = ctx.rng("AC-12")
    for n in (2, 3):
        Ks = [random_polytope(rng, n, npts=n + 2) for _ in range(n)]
        base = mixed_volume(Ks)
        for perm in permutations(range(n)):
            v = mixed_volume([Ks[i] for i in perm])
            _expect(v == base, subcase="symmetry", bodies=Ks, permutation=list(perm), value=v, expected=base)
    for n in (1, 2, 3):
        K = random_polytope(rng, n, npts=n + 2)
        v = mixed_volume([K] * n)
        _expect(v == volume(K), subcase="diagonal", body=K, value=v, volume=volume(K))
    Q = box([0, 0], [1, 1])
    v = mixed_volume([Q, Q])
    _expect(v == 1, subcase="V(square, square)", value=v)
    v = mixed_volume([segment([0, 0], [1, 0]), segment([0, 0], [0, 1])])
    _expect(v == Fraction(1, 2), subcase="V(e1, e2)", value=v)
    return {}


def _ac13(ctx: _Context) -> dict:
    worst = 0.0
    for n in (1, 2, 3):
        for a in (Fraction(1), Fraction(3, 2)):
            K = box([0] * n, [a] * n)
            for k in range(n + 1):
                got = intrinsic_volume(K, k)
                want = comb(n, k) * float(a) ** k
                err = abs(got - want)
                worst = max(worst, err)
                _expect(err <= 1e-9, n=n, a=a, k=k, got=got, expected=want)
    rng = ctx.rng("AC-13")
    for n in (1, 2, 3):
        K = random_polytope(rng, n, npts=n + 3)
        got, want = intrinsic_volume(K, n), float(volume(K))
        _expect(abs(got - want) <= 1e-12, subcase="top degree", body=K, got=got, expected=want)
    return {"max_abs_error": worst}


CHECKS: dict[str, Callable[[_Context], dict]] = {
    "AC-1": _ac1, "AC-2": _ac2, "AC-3": _ac3, "AC-4": _ac4, "AC-5": _ac5,
    "AC-6": _ac6, "AC-7": _ac7, "AC-8": _ac8, "AC-9": _ac9, "AC-10": _ac10,
    "AC-11": _ac11, "AC-12": _ac12, "AC-13": _ac13,
}


def run_check(cid: str, ctx: _Context) -> CheckRecord:
    t0 = time.perf_counter()
    try:
        witness = CHECKS[cid](ctx)
        passed = True
    except _Fail as e:
        witness, passed = e.witness, False
    except Exception as e:  # a crash is a failed check, not a crashed run
        witness, passed = {"error": f"{type(e).__name__}: {e}"}, False
    return CheckRecord(cid, CRITERIA[cid], passed, witness, (time.perf_counter() - t0) * 1000)


def acceptance_run(
    config: Config | None = None,
    *,
    only: list[str] | None = None,
    progress: Callable[[CheckRecord], None] | None = None,
) -> RunReport:
    """Run the acceptance criteria (all, or the ids in ``only``) in order."""
    cfg = config or get_config()
    ids = list(CHECKS) if only is None else [c for c in CHECKS if c in only]
    with using_config(cfg):
        ctx = _Context(cfg.seed)
        report = RunReport(__version__, cfg.seed, {k: v for k, v in dataclasses.asdict(cfg).items() if k != "seed"})
        for cid in ids:
            rec = run_check(cid, ctx)
            report.checks.append(rec)
            if progress is not None:
                progress(rec)
    return report
