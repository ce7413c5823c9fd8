"""Exhaustive and randomized verification suites.

Each suite returns a :class:`SuiteResult` with a case count, a failure count
and the first counterexample.  All randomness flows from the ``seed``
argument through ``numpy.random.default_rng``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import blocks, oracle, reflexivity
from .groups import FiniteGroup, all_subgroups, build_group, generate_subgroup, is_subgroup, left_cosets
from .support import (
    SupportRelation,
    e_star,
    group_predicates,
    star_closure,
    support_predicates,
)

BASE_CATALOG = (
    "cyclic:2",
    "cyclic:3",
    "cyclic:4",
    "product:(cyclic:2,cyclic:2)",
    "cyclic:5",
    "cyclic:6",
    "symmetric:3",
)
EXTRA_CATALOG = (
    "cyclic:1",
    "cyclic:7",
    "cyclic:8",
    "product:(cyclic:2,cyclic:4)",
    "product:(cyclic:2,product:(cyclic:2,cyclic:2))",
    "dihedral:4",
    "cyclic:9",
    "product:(cyclic:3,cyclic:3)",
    "dihedral:5",
    "cyclic:10",
    "cyclic:12",
    "product:(cyclic:2,cyclic:6)",
    "dihedral:6",
)


def catalog(max_order: int, extended: bool = False) -> list[FiniteGroup]:
    specs = BASE_CATALOG + (EXTRA_CATALOG if extended else ())
    groups = [build_group(s) for s in specs]
    return sorted((G for G in groups if G.order <= max_order), key=lambda G: G.order)


def subset_from_mask(m: int) -> frozenset:
    return frozenset(i for i in range(m.bit_length()) if m >> i & 1)


def random_relation(
    n: int, rng, density: float | None = None, unital: bool = False, symmetric: bool = False
) -> SupportRelation:
    if density is None:
        density = rng.uniform(0.1, 0.7)
    mask = rng.random((n, n)) < density
    if symmetric:
        mask = np.triu(mask)
        mask = mask | mask.T
    if unital:
        mask[np.diag_indices(n)] = True
    return SupportRelation.from_mask(mask)


@dataclass
class SuiteResult:
    name: str
    cases: int = 0
    failures: int = 0
    counterexample: str | None = None
    notes: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.failures == 0 and self.cases > 0

    def record(self, ok: bool, describe: Callable[[], str]) -> None:
        self.cases += 1
        if not ok:
            self.failures += 1
            if self.counterexample is None:
                self.counterexample = describe()

    def to_dict(self) -> dict:
        return {
            "suite": self.name,
            "passed": self.passed,
            "cases": self.cases,
            "failures": self.failures,
            "counterexample": self.counterexample,
            "notes": self.notes,
        }

    def summary(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        line = f"{self.name}: {status} ({self.cases} cases, {self.failures} failures)"
        if self.counterexample:
            line += f"\n  first counterexample: {self.counterexample}"
        for k, v in self.notes.items():
            line += f"\n  {k}: {v}"
        return line


def prop43(max_order: int = 6, groups=None) -> SuiteResult:
    """Group-side vs support-side unital / self-adjoint / algebra flags, every subset."""
    res = SuiteResult("prop43")
    for G in groups if groups is not None else catalog(max_order):
        for m in range(1 << G.order):
            E = subset_from_mask(m)
            grp = group_predicates(G, E)
            sup = support_predicates(e_star(G, E))
            vn = all(sup) == (bool(E) and is_subgroup(G, E))
            res.record(grp == sup and vn, lambda: f"{G.name} E={sorted(E)} group={grp} support={sup}")
    return res


def _cor44_case(res: SuiteResult, G: FiniteGroup, E: frozenset) -> None:
    _, bs = star_closure(e_star(G, E))
    cosets = left_cosets(G, generate_subgroup(G, E)).classes
    res.record(bs.classes == cosets, lambda: f"{G.name} E={sorted(E)} components={bs.classes} cosets={cosets}")


def cor44(max_order: int = 12, trials: int = 200, seed: int = 0, groups=None) -> SuiteResult:
    """Components of E* against left cosets of <E>.

    Exhaustive over nonempty E for |G| <= 6, random subsets above.
    """
    res = SuiteResult("cor44")
    rng = np.random.default_rng(seed)
    for G in groups if groups is not None else catalog(max_order, extended=True):
        if G.order <= 6:
            for m in range(1, 1 << G.order):
                _cor44_case(res, G, subset_from_mask(m))
        else:
            for _ in range(trials):
                m = int(rng.integers(1, 1 << G.order))
                _cor44_case(res, G, subset_from_mask(m))
    return res


def decomp23(gamma: int = 8, trials: int = 200, symmetric_trials: int | None = None, seed: int = 0) -> SuiteResult:
    """Per-atom CSL decompositions of random unital supports, |Γ| in 2..gamma."""
    res = SuiteResult("decomp23")
    rng = np.random.default_rng(seed)
    if symmetric_trials is None:
        symmetric_trials = trials // 2
    for sym, count in ((False, trials), (True, symmetric_trials)):
        for _ in range(count):
            n = int(rng.integers(2, gamma + 1))
            omega = random_relation(n, rng, unital=True, symmetric=sym)
            certs = reflexivity.full_decomposition(omega)
            ok = reflexivity.intersect_summands(certs, n) == omega
            ok = ok and all(c.ok for c in certs)
            ok = ok and all(
                reflexivity.is_csl_algebra_support(s) for c in certs for s in (c.summand_a1, c.summand_a2)
            )
            if sym:
                ok = ok and reflexivity.intersect_selfadjoint(certs, n) == omega
            if n <= 6:
                ok = ok and reflexivity.intersect_all_subsets(omega) == omega
            res.record(ok, lambda: f"symmetric={sym} omega={omega}")
    return res


def random_generators(n: int, rng) -> list[np.ndarray]:
    """One to three sparse complex matrices with entries away from zero."""
    out = []
    for _ in range(int(rng.integers(1, 4))):
        rel = random_relation(n, rng, density=rng.uniform(0.05, 0.5))
        out.append(oracle.random_support_matrix(rel, int(rng.integers(2**31))))
    return out


def _eq21_holds(omega: SupportRelation, T: np.ndarray) -> bool:
    n = omega.ground
    phi = reflexivity.PhiMap(omega)
    for a in range(1 << n):
        fa = phi.bits(a)
        P = np.diag([float(a >> i & 1) for i in range(n)])
        Qperp = np.diag([0.0 if fa >> i & 1 else 1.0 for i in range(n)])
        if np.abs(Qperp @ T @ P).max(initial=0.0) > 1e-9:
            return False
    return True


def lemma21(gamma: int = 6, trials: int = 100, seed: int = 0) -> SuiteResult:
    """ref_hull(bimodule_support(S)) against the definitional oracle."""
    res = SuiteResult("lemma21")
    rng = np.random.default_rng(seed)
    top = min(gamma, oracle.MAX_REF_DIM)
    for _ in range(trials):
        n = int(rng.integers(1, top + 1))
        S = random_generators(n, rng)
        omega = reflexivity.bimodule_support(S)
        hull = reflexivity.ref_hull(omega)
        ref = oracle.ref_oracle(S)
        T = oracle.random_support_matrix(omega, int(rng.integers(2**31)))
        ok = hull == ref and _eq21_holds(omega, T)
        res.record(ok, lambda: f"n={n} hull={hull.pairs()} oracle={ref.pairs()}")
    return res


def tip(gamma: int = 4, trials: int = 50, seed: int = 0) -> SuiteResult:
    """Support-level and numeric trivial intersection checks on random unital supports."""
    res = SuiteResult("tip")
    rng = np.random.default_rng(seed)
    U = [np.eye(3), np.diag([1.0, -1.0, 0.0])]
    ok, w = oracle.numeric_tip_check(U)
    res.record(not ok and w is not None and w.selected == frozenset({2}), lambda: f"counterexample span gave {ok}, {w}")
    for _ in range(trials):
        n = int(rng.integers(1, gamma + 1))
        omega = random_relation(n, rng, unital=True)
        units = oracle.matrix_unit_space(omega)
        bs = blocks.cstar_support(omega)
        alg = oracle.algebra_closure(units, seed=int(rng.integers(2**31)))
        num_ok, _ = oracle.numeric_tip_check(units)
        sup_ok, _ = blocks.trivial_intersection(omega)
        diag = [oracle.matrix_unit(n, i, i) for i in range(n)]
        hyp = oracle.enve_hypotheses_check(units, diag)
        good = (
            num_ok
            and sup_ok
            and hyp
            and alg.block_dims == bs.block_dims
            and alg.projection_supports() == list(bs.classes)
            and sum(d * d for d in alg.block_dims) == alg.dimension
            and alg.dimension == len(bs.relation())
        )
        res.record(good, lambda: f"omega={omega} numeric={alg.block_dims} support={bs.block_dims}")
    return res


def thm45(max_order: int = 6) -> SuiteResult:
    """Order/index decision against exhaustive bijection search, all subgroup pairs."""
    res = SuiteResult("thm45")
    groups = [build_group("cyclic:1")] + catalog(max_order)
    groups = [G for G in groups if G.order <= max_order]
    pairs = [(G, H) for G in groups for H in all_subgroups(G)]
    agree_iso = 0
    for G1, H1 in pairs:
        for G2, H2 in pairs:
            verdict = blocks.module_iso_decide(G1, H1, G2, H2)
            found = blocks.bruteforce_module_iso(G1, H1, G2, H2)
            ok = verdict.isomorphic == (found is not None)
            if verdict.isomorphic:
                agree_iso += 1
                ok = ok and blocks.verify_witness(G1, H1, G2, H2, verdict.witness)
            res.record(
                ok,
                lambda: f"{G1.name} H1={list(H1.elements)} vs {G2.name} H2={list(H2.elements)} "
                f"decided={verdict.isomorphic} search={found}",
            )
    res.notes["isomorphic pairs"] = agree_iso
    return res


def lemma42(gamma: int = 5, trials: int = 100, seed: int = 0) -> SuiteResult:
    """Annihilation-defined M(Ω) against the matrix-unit span."""
    res = SuiteResult("lemma42")
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(trials):
        n = int(rng.integers(1, min(gamma, 5) + 1))
        omega = random_relation(n, rng)
        d_ann, d_units, resid = oracle.lemma42_check(omega)
        worst = max(worst, resid)
        res.record(d_ann == d_units == len(omega) and resid < 1e-9, lambda: f"omega={omega} dims={d_ann},{d_units}")
    res.notes["max residual"] = f"{worst:.2e}"
    return res


SUITES = {
    "prop43": lambda o: prop43(max_order=o.get("max_order", 6)),
    "cor44": lambda o: cor44(max_order=o.get("max_order", 12), trials=o.get("trials", 200), seed=o.get("seed", 0)),
    "decomp23": lambda o: decomp23(gamma=o.get("gamma", 8), trials=o.get("trials", 200), seed=o.get("seed", 0)),
    "lemma21": lambda o: lemma21(gamma=o.get("gamma", 6), trials=o.get("trials", 100), seed=o.get("seed", 0)),
    "tip": lambda o: tip(gamma=o.get("gamma", 4), trials=o.get("trials", 50), seed=o.get("seed", 0)),
    "thm45": lambda o: thm45(max_order=o.get("max_order", 6)),
    "lemma42": lambda o: lemma42(gamma=o.get("gamma", 5), trials=o.get("trials", 100), seed=o.get("seed", 0)),
}


def run_suite(name: str, **options) -> SuiteResult:
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    return SUITES[name]({k: v for k, v in options.items() if v is not None})
