"""The acceptance suite: ten exact checks run on the built-in matrices.

Shared by ``tests/test_acceptance.py`` and ``sftgroup selftest``.  Every check
is deterministic for a given seed.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .adic_tables import (
    OrderClass,
    apply,
    classify_order,
    compose,
    expand_row,
    identity_table,
    inverse,
    random_table,
    tables_equivalent,
)
from .exceptions import SemiconjugacyError
from .invariants import Simplicity, det_id_minus_A, k0_group, simplicity_verdict
from .matrices import all_builtins, builtin
from .perron_field import compute_perron, endpoint_l, endpoint_r, kms_weight
from .pl_realization import (
    SemiconjugacyResult,
    check_semiconjugacy,
    derivative,
    kms_expectation,
    pl_eval,
    rho,
    singular_sets,
    table_to_pl,
)
from .sft_core import EppPoint, enumerate_points, enumerate_words, random_point


@dataclass
class CriterionResult:
    number: int
    name: str
    passed: bool
    detail: str
    seconds: float = 0.0
    failures: list = field(default_factory=list)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] criterion {self.number:2d} {self.name}: {self.detail} ({self.seconds:.2f}s)"


def _perron_all():
    return {name: compute_perron(A) for name, A in all_builtins().items()}


def _random_expansion(T, rng, steps=2):
    for _ in range(steps):
        T = expand_row(T, rng.randrange(len(T)))
    return T


# ------------------------------------------------------------ 1


def perron_exactness(seed=0) -> CriterionResult:
    A = builtin("fibonacci")
    t0 = time.perf_counter()
    P = compute_perron(A)
    elapsed = time.perf_counter() - t0
    b = P.beta
    ok_p = P.p == (b - 1, 2 - b)
    residual = [sum((P.p[j - 1] for j in A.successors(i)), P.field.zero) - b * P.p[i - 1]
                for i in A.symbols]
    ok_res = all(r.is_zero() for r in residual)
    ok_poly = P.min_poly == (-1, -1, 1)
    passed = ok_p and ok_res and ok_poly and elapsed < 1.0
    return CriterionResult(1, "Perron exactness", passed,
                           f"p=(b-1, 2-b): {ok_p}, A.p - b.p = 0: {ok_res}, "
                           f"time {elapsed:.3f}s < 1s")


# ------------------------------------------------------------ 2


def tiling(seed=0, max_n=8) -> CriterionResult:
    failures = []
    for name, P in _perron_all().items():
        for n in range(1, max_n + 1):
            words = enumerate_words(P.matrix, n)
            total = sum((kms_weight(P, w) for w in words), P.field.zero)
            if total != 1:
                failures.append(f"{name} n={n}: weights sum to {total!r}")
            if endpoint_l(P, words[0]) != 0 or endpoint_r(P, words[-1]) != 1:
                failures.append(f"{name} n={n}: cylinders do not cover [0,1)")
            for u, v in zip(words, words[1:]):
                if endpoint_r(P, u) != endpoint_l(P, v):
                    failures.append(f"{name} n={n}: gap between {u} and {v}")
                    break
    return CriterionResult(2, "tiling", not failures,
                           f"5 matrices, n <= {max_n}, {len(failures)} failures",
                           failures=failures)


# ------------------------------------------------------------ 3


def group_axioms(seed=0, trials=500) -> CriterionResult:
    failures = []
    t0 = time.perf_counter()
    for name, A in all_builtins().items():
        rng = random.Random(f"{seed}-axioms-{name}")
        e = identity_table(A)
        for k in range(trials):
            T1, T2, T3 = (random_table(A, max_depth=3, rng=rng) for _ in range(3))
            checks = {
                "associativity": tables_equivalent(compose(compose(T1, T2), T3),
                                                   compose(T1, compose(T2, T3))),
                "left identity": tables_equivalent(compose(e, T1), T1),
                "right identity": tables_equivalent(compose(T1, e), T1),
                "left inverse": tables_equivalent(compose(inverse(T1), T1), e),
                "right inverse": tables_equivalent(compose(T1, inverse(T1)), e),
            }
            failures += [f"{name} #{k}: {law}" for law, ok in checks.items() if not ok]
    elapsed = time.perf_counter() - t0
    passed = not failures and elapsed < 60
    return CriterionResult(3, "group axioms", passed,
                           f"{trials} triples x 5 matrices, {len(failures)} failures, "
                           f"{elapsed:.1f}s < 60s", failures=failures)


# ------------------------------------------------------------ 4


def equality_oracle(seed=0, pairs=200) -> CriterionResult:
    """tables_equivalent against comparing images of every small EppPoint."""
    failures = []
    mats = list(all_builtins().items())
    rng = random.Random(f"{seed}-equality")
    points_cache = {}
    n_equal = 0
    for k in range(pairs):
        name, A = mats[k % len(mats)]
        T1 = random_table(A, max_depth=2, rng=rng)
        mode = k % 4
        if mode == 0:
            T2 = _random_expansion(T1, rng)
        elif mode == 1:
            T2 = compose(T1, identity_table(A), reduced=False)
        elif mode == 2:
            S = random_table(A, max_depth=2, rng=rng)
            T2 = compose(compose(T1, S, reduced=False), inverse(S), reduced=False)
        else:
            T2 = random_table(A, max_depth=2, rng=rng)
        M = max(T1.domain_depth, T2.domain_depth)
        key = (name, M + 2)
        if key not in points_cache:
            points_cache[key] = enumerate_points(A, M + 2, 3)
        pointwise = all(apply(T1, x) == apply(T2, x) for x in points_cache[key])
        claimed = tables_equivalent(T1, T2)
        n_equal += claimed
        if claimed != pointwise:
            failures.append(f"{name} #{k}: {T1} vs {T2}: tables_equivalent={claimed}, "
                            f"pointwise={pointwise}")
    return CriterionResult(4, "equality oracle", not failures,
                           f"{pairs} pairs ({n_equal} equivalent), {len(failures)} disagreements",
                           failures=failures)


# ------------------------------------------------------------ 5


def pl_homomorphism(seed=0, pairs=200, samples=10) -> CriterionResult:
    failures = []
    perron = list(_perron_all().items())
    rng = random.Random(f"{seed}-homomorphism")
    count = 0
    for k in range(pairs):
        name, P = perron[k % len(perron)]
        T1 = random_table(P.matrix, rng=rng)
        T2 = random_table(P.matrix, rng=rng)
        f1, f2 = table_to_pl(P, T1), table_to_pl(P, T2)
        f12 = table_to_pl(P, compose(T1, T2))
        for pc in f12.pieces:
            for s in range(samples):
                t = pc.x_lo + Fraction(s, samples) * (pc.x_hi - pc.x_lo)
                count += 1
                if pl_eval(f12, t) != pl_eval(f1, pl_eval(f2, t)):
                    failures.append(f"{name} #{k}: {T1} o {T2} at {t!r}")
    return CriterionResult(5, "PL homomorphism", not failures,
                           f"{pairs} pairs, {count} exact sample points, "
                           f"{len(failures)} mismatches", failures=failures)


# ------------------------------------------------------------ 6


def derivative_laws(seed=0, trials=200) -> CriterionResult:
    failures = []
    for name, P in _perron_all().items():
        rng = random.Random(f"{seed}-derivative-{name}")
        for k in range(trials):
            T1 = random_table(P.matrix, rng=rng)
            T2 = random_table(P.matrix, rng=rng)
            D1, D2 = derivative(P, T1), derivative(P, T2)
            if kms_expectation(P, D1) != 1:
                failures.append(f"{name} #{k}: phi(D) != 1 for {T1}")
            # D_{τ2∘τ1} = D_{τ1}·(D_{τ2}∘τ1)
            if not derivative(P, compose(T2, T1)).equivalent(D1 * D2.precompose(T1)):
                failures.append(f"{name} #{k}: chain rule for {T2} o {T1}")
            # D_{τ^{-1}} = (D_τ∘τ^{-1})^{-1}
            if not derivative(P, inverse(T1)).equivalent(
                    D1.precompose(inverse(T1)).map(lambda v: 1 / v)):
                failures.append(f"{name} #{k}: inverse rule for {T1}")
    return CriterionResult(6, "derivative laws", not failures,
                           f"{trials} tables/pairs x 5 matrices, {len(failures)} failures",
                           failures=failures)


# ------------------------------------------------------------ 7


def semiconjugacy(seed=0, per_matrix=100) -> CriterionResult:
    failures = []
    skipped = 0
    for name, P in _perron_all().items():
        rng = random.Random(f"{seed}-semiconjugacy-{name}")
        verified = attempts = 0
        while verified < per_matrix and attempts < 20 * per_matrix:
            attempts += 1
            T = random_table(P.matrix, rng=rng)
            x = random_point(P.matrix, rng)
            try:
                res = check_semiconjugacy(P, T, x)
            except SemiconjugacyError as exc:
                failures.append(f"{name}: {exc}")
                continue
            if res is SemiconjugacyResult.VERIFIED:
                verified += 1
            else:
                skipped += 1
        if verified < per_matrix:
            failures.append(f"{name}: only {verified} verified points in {attempts} draws")
    # the boundary point: ρ((12)^∞) = β - 1 = l(21) for the swap
    P = compute_perron(builtin("fibonacci"))
    from .adic_tables import validate_table
    swap = validate_table(P.matrix, [((1,), (2, 1)), ((2, 1), (1,))])
    boundary = EppPoint.make((), (1, 2))
    on_C = any(rho(P, boundary) == c for c in singular_sets(P, swap)[0])
    boundary_ok = on_C and check_semiconjugacy(P, swap, boundary) is SemiconjugacyResult.SKIPPED_SINGULAR
    if not boundary_ok:
        failures.append("swap at (12)^inf is not reported as SkippedSingular")
    return CriterionResult(7, "semiconjugacy", not failures,
                           f"{per_matrix} verified points x 5 matrices, {skipped} skipped, "
                           f"(12)^inf skipped as singular: {boundary_ok}", failures=failures)


# ------------------------------------------------------------ 8


def vn_recovery(seed=0, max_n=8) -> CriterionResult:
    failures = []
    for N in (2, 3):
        A = builtin(f"full{N}")
        P = compute_perron(A)
        for n in range(1, max_n + 1):
            for w in enumerate_words(A, n):
                expected = sum(Fraction(wi - 1, N**i) for i, wi in enumerate(w, 1))
                if endpoint_l(P, w) != expected:
                    failures.append(f"N={N}: l({w}) != {expected}")
        G = k0_group(A)
        want = () if N == 2 else (N - 1,)
        if G.free_rank or G.torsion != want:
            failures.append(f"N={N}: K0 = {G}, expected Z/{N - 1}")
        verdict = simplicity_verdict(A)
        if verdict is not (Simplicity.SIMPLE if N == 2 else Simplicity.NOT_SIMPLE):
            failures.append(f"N={N}: verdict {verdict.value}")
    return CriterionResult(8, "V_N recovery", not failures,
                           f"N-adic endpoints for n <= {max_n}, K0 = Z/(N-1), "
                           f"full3 NotSimple; {len(failures)} failures", failures=failures)


# ------------------------------------------------------------ 9


def fibonacci_invariants(seed=0) -> CriterionResult:
    A = builtin("fibonacci")
    G = k0_group(A)
    det = det_id_minus_A(A)
    verdict = simplicity_verdict(A)
    passed = G.is_trivial and det == -1 and verdict is Simplicity.SIMPLE
    return CriterionResult(9, "Fibonacci invariants", passed,
                           f"K0 = {G}, det(I - A) = {det}, verdict {verdict.value}")


# ------------------------------------------------------------ 10


def subgroup_closure(seed=0, count=300) -> CriterionResult:
    failures = []
    allowed = {
        OrderClass.ORDER_PRESERVING: {OrderClass.ORDER_PRESERVING},
        OrderClass.CYCLIC_ORDER_PRESERVING: {OrderClass.ORDER_PRESERVING,
                                             OrderClass.CYCLIC_ORDER_PRESERVING},
    }
    for name, A in all_builtins().items():
        for kind, ok in allowed.items():
            rng = random.Random(f"{seed}-closure-{name}-{kind.value}")
            tables = [random_table(A, kind=kind, rng=rng) for _ in range(count)]
            for k, T in enumerate(tables):
                if classify_order(T) not in ok:
                    failures.append(f"{name} {kind.value}: generated {T} is {classify_order(T).value}")
                S = tables[(k + 1) % count]
                for label, U in (("product", compose(T, S)), ("inverse", inverse(T))):
                    if classify_order(U) not in ok:
                        failures.append(f"{name} {kind.value}: {label} of {T} is "
                                        f"{classify_order(U).value}")
                E = _random_expansion(T, rng, steps=rng.randint(1, 3))
                if classify_order(E) is not classify_order(T):
                    failures.append(f"{name}: expansion changed the class of {T}")
    return CriterionResult(10, "subgroup closure", not failures,
                           f"{count} OP and {count} cyclic tables x 5 matrices, "
                           f"{len(failures)} failures", failures=failures)


CRITERIA: dict[int, Callable[..., CriterionResult]] = {
    1: perron_exactness,
    2: tiling,
    3: group_axioms,
    4: equality_oracle,
    5: pl_homomorphism,
    6: derivative_laws,
    7: semiconjugacy,
    8: vn_recovery,
    9: fibonacci_invariants,
    10: subgroup_closure,
}


def run_criterion(number: int, seed=0) -> CriterionResult:
    t0 = time.perf_counter()
    res = CRITERIA[number](seed)
    res.seconds = time.perf_counter() - t0
    return res


def run_all(seed=0, numbers=None) -> list:
    return [run_criterion(k, seed) for k in (numbers or sorted(CRITERIA))]
