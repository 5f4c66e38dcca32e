"""Verification suites: exact symbolic identities and numeric oracles.

Each suite produces a deterministic report (given the seed); check names are
stable and reports are emitted sorted by name so reruns are byte-identical.
"""

from __future__ import annotations

import cmath
import json
import math
import random
import time
from dataclasses import dataclass, field
from itertools import permutations
from math import comb

from . import checks as numeric_checks
from .analytic import BranchedP, ParameterPoint, f_series, gamma_c
from .indexing import FixedPointIndex, complement, ell, longest_image, sigma, subsets
from .integral import mellin_barnes
from .ktheory import (
    KTheoryClass,
    is_admissible,
    pi_inf,
    pi_zero,
    orthogonality_check,
    tau_apply,
    tau_det,
    tau_det_reference,
    tau_inv_apply,
    weight_det_check,
)
from .laurent import LaurentPolynomial
from .schur import (
    char_poly,
    expand_in_schur,
    laplace_orthogonality_check,
    laplace_sum_check,
    m_matrix,
    monodromy_matrices,
    reconstruct_from_schur,
    schur_basis_det,
    schur_basis_det_reference,
    schur_class,
    t_matrix,
)
from .weights import (
    coh_context,
    coh_weight,
    e_at_subset,
    eval_at_fixed_point,
    membership_P,
    q_class,
    r_at_subset,
    restrict_coh,
    trig_context,
    trig_weight,
    weight_of_class,
    zh_context,
)


@dataclass
class CheckResult:
    name: str
    parameters: dict
    status: str  # pass | fail | skip
    max_abs_err: object = "exact"
    runtime_ms: float | None = None


@dataclass
class SuiteReport:
    suite: str
    seed: int
    checks: list = field(default_factory=list)

    @property
    def failed(self):
        return [c for c in self.checks if c.status == "fail"]

    def to_json(self, timings=False):
        payload = {
            "suite": self.suite,
            "seed": self.seed,
            "checks": [
                {
                    "name": c.name,
                    "parameters": c.parameters,
                    "status": c.status,
                    "max_abs_err": c.max_abs_err,
                    **({"runtime_ms": c.runtime_ms} if timings else {}),
                }
                for c in sorted(self.checks, key=lambda c: c.name)
            ],
            "failed": len(self.failed),
        }
        return json.dumps(payload, indent=2, sort_keys=True)


def _run(report, name, parameters, fn):
    t0 = time.perf_counter()
    try:
        out = fn()
        if out is True or out is None:
            status, max_err = "pass", "exact"
        elif out is False:
            status, max_err = "fail", "check returned False"
        elif isinstance(out, (int, float)):
            status, max_err = "pass", float(out)
        else:
            status, max_err = "pass", str(out)
    except AssertionError as exc:
        status, max_err = "fail", str(exc)
    except Exception as exc:  # deliberate: a crashed check is a failed check
        status, max_err = "fail", f"{type(exc).__name__}: {exc}"
    report.checks.append(
        CheckResult(
            name=name,
            parameters=parameters,
            status=status,
            max_abs_err=max_err,
            runtime_ms=round(1000 * (time.perf_counter() - t0), 3),
        )
    )


def _expect(rep):
    """Fold a numeric CheckReport into the suite protocol."""
    if rep.passed:
        return float(rep.max_err)
    raise AssertionError(f"max_err={rep.max_err} details={rep.details}")


def _random_laurent(rng, ctx, names, max_terms=3, max_exp=1):
    out = ctx.zero()
    for _ in range(rng.randint(1, max_terms)):
        exps = {name: rng.randint(-max_exp, max_exp) for name in names}
        out = out + ctx.monomial(rng.choice([-2, -1, 1, 2, 3]), exps)
    return out


def random_admissible_class(rng, k, n):
    """A random localized class: Schur-basis combination with random
    Laurent-polynomial coefficients (admissible by construction)."""
    ctx = zh_context(n)
    names = [f"Z{a}" for a in range(1, n + 1)] + ["H"]
    out = KTheoryClass.zero(k, n)
    for index in subsets(k, n):
        if rng.random() < 0.7:
            out = out + schur_class(index, k, n) * _random_laurent(rng, ctx, names)
    return out


def _check_z_symmetry(k, n):
    ctx = trig_context(k, n)
    for kind in ("reduced", "zero", "inf"):
        w = trig_weight(kind, k, n)
        for group in (range(1, k + 1), range(k + 1, n + 1)):
            group = list(group)
            for a, b in zip(group, group[1:]):
                swap = {f"Z{a}": ctx.var(f"Z{b}"), f"Z{b}": ctx.var(f"Z{a}")}
                assert w.substitute(swap) == w, f"{kind} not symmetric in Z{a},Z{b}"
    return True


def _check_membership_all_sigma(k, n, sample=None):
    perms = list(permutations(range(1, n + 1)))
    if sample is not None and len(perms) > sample:
        perms = perms[:: max(1, len(perms) // sample)]
    for perm in perms:
        for kind in ("zero", "inf"):
            w = trig_weight(kind, k, n, perm)
            assert membership_P(w, k, n), f"{kind} at sigma={perm} not in P"
    return True


def _check_eval_identities(k, n):
    for i in subsets(k, n):
        e_r = e_at_subset(i) * r_at_subset(i)
        for j in subsets(k, n):
            w0 = trig_weight("zero", k, n, sigma(j))
            winf = trig_weight("inf", k, n, sigma(j))
            v0 = eval_at_fixed_point(w0, i, shift=False)
            vinf = eval_at_fixed_point(winf, i, shift=True)
            want = e_r if i == j else zh_context(n).zero()
            assert v0 == want, f"zero-side evaluation at I={i}, J={j}"
            assert vinf == want, f"inf-side evaluation at I={i}, J={j}"
    return True


def _check_pi_roundtrip(rng, k, n, count=2):
    for _ in range(count):
        x = random_admissible_class(rng, k, n)
        lifted = weight_of_class(x, "zero")
        assert pi_zero(lifted, k, n) == x, "zero-side lift roundtrip"
        lifted = weight_of_class(x, "inf")
        assert pi_inf(lifted, k, n) == x, "inf-side lift roundtrip"
    return True


def _check_tau_roundtrip(rng, k, n, count=2):
    for _ in range(count):
        x = random_admissible_class(rng, k, n)
        tx = tau_apply(x)
        assert is_admissible(tx), "transition image not admissible"
        assert tau_inv_apply(tx) == x, "inverse transition roundtrip"
        ty = tau_inv_apply(x)
        assert is_admissible(ty), "inverse transition image not admissible"
        assert tau_apply(ty) == x, "transition roundtrip"
    return True


def _check_schur_expand_roundtrip(rng, k, n, count=2):
    for _ in range(count):
        x = random_admissible_class(rng, k, n)
        coeffs = expand_in_schur(x)
        assert reconstruct_from_schur(coeffs, k, n) == x, "Schur expansion roundtrip"
    return True


def _check_matrices(k, n):
    m = m_matrix(k, n)
    t, tinv = t_matrix(k, n)
    cm = char_poly(m)
    tmt = monodromy_matrices(k, n)["muinf_on_zero_basis"]
    assert char_poly(tmt) == cm, "characteristic polynomials differ"
    return True


def _check_indexing(k, n):
    total = sum(ell(i) for i in subsets(k, n))
    assert total * 2 == k * (n - k) * comb(n, k), "length-sum identity"
    for i in subsets(k, n):
        assert complement(complement(i)) == i, "complement involution"
        assert ell(i) + ell(longest_image(i)) == k * (n - k), "longest-element identity"
    return True


def _check_coh_weight(k, n):
    ctx = coh_context(k, n)
    w = coh_weight(k, n)
    for a in range(1, k):
        swap = {f"g{a}": ctx.var(f"g{a + 1}"), f"g{a + 1}": ctx.var(f"g{a}")}
        assert w.substitute(swap) == w, "cohomological weight not g-symmetric"
    if k >= 2 and n <= 3:
        for J in subsets(k, n):
            restricted = restrict_coh(w, J)
            for a in range(1, n + 1):
                za = ctx.var(f"z{a}")
                hit = restricted.substitute_poly(
                    {"t1": za, "t2": za + ctx.var("h")}
                )
                assert hit.is_zero(), f"vanishing failure at J={J}, a={a}"
    return True


def symbolic_suite(max_n=4, seed=2024, spot=True):
    report = SuiteReport(suite="symbolic", seed=seed)
    rng = random.Random(seed)
    pairs = [(k, n) for n in range(1, max_n + 1) for k in range(1, n + 1)]
    for k, n in pairs:
        p = {"k": k, "n": n}
        _run(report, f"indexing_identities_k{k}_n{n}", p, lambda k=k, n=n: _check_indexing(k, n))
        _run(report, f"z_symmetry_k{k}_n{n}", p, lambda k=k, n=n: _check_z_symmetry(k, n))
        _run(
            report,
            f"membership_all_sigma_k{k}_n{n}",
            p,
            lambda k=k, n=n: _check_membership_all_sigma(k, n),
        )
        _run(
            report,
            f"eval_identities_k{k}_n{n}",
            p,
            lambda k=k, n=n: _check_eval_identities(k, n),
        )
        _run(
            report,
            f"pi_roundtrip_k{k}_n{n}",
            p,
            lambda k=k, n=n: _check_pi_roundtrip(rng, k, n),
        )
        _run(
            report,
            f"orthogonality_k{k}_n{n}",
            p,
            lambda k=k, n=n: orthogonality_check(k, n),
        )
        _run(
            report,
            f"tau_det_k{k}_n{n}",
            p,
            lambda k=k, n=n: tau_det(k, n) == tau_det_reference(k, n),
        )
        _run(
            report,
            f"tau_roundtrip_k{k}_n{n}",
            p,
            lambda k=k, n=n: _check_tau_roundtrip(rng, k, n),
        )
        _run(
            report,
            f"weight_det_k{k}_n{n}",
            p,
            lambda k=k, n=n: weight_det_check(k, n),
        )
        _run(
            report,
            f"schur_matrices_k{k}_n{n}",
            p,
            lambda k=k, n=n: _check_matrices(k, n),
        )
        _run(
            report,
            f"schur_basis_det_k{k}_n{n}",
            p,
            lambda k=k, n=n: schur_basis_det(k, n) == schur_basis_det_reference(k, n),
        )
        _run(
            report,
            f"laplace_sum_k{k}_n{n}",
            p,
            lambda k=k, n=n: laplace_sum_check(k, n),
        )
        _run(
            report,
            f"laplace_orthogonality_k{k}_n{n}",
            p,
            lambda k=k, n=n: laplace_orthogonality_check(k, n),
        )
        _run(
            report,
            f"schur_expand_roundtrip_k{k}_n{n}",
            p,
            lambda k=k, n=n: _check_schur_expand_roundtrip(rng, k, n),
        )
        _run(report, f"coh_weight_k{k}_n{n}", p, lambda k=k, n=n: _check_coh_weight(k, n))
    if spot and max_n >= 4:
        for k, n in ((1, 5), (2, 5)):
            p = {"k": k, "n": n, "spot": True}
            _run(report, f"spot_indexing_k{k}_n{n}", p, lambda k=k, n=n: _check_indexing(k, n))
            _run(report, f"spot_z_symmetry_k{k}_n{n}", p, lambda k=k, n=n: _check_z_symmetry(k, n))
            _run(
                report,
                f"spot_membership_k{k}_n{n}",
                p,
                lambda k=k, n=n: _check_membership_all_sigma(k, n, sample=24),
            )
            _run(
                report,
                f"spot_eval_identities_k{k}_n{n}",
                p,
                lambda k=k, n=n: _check_eval_identities(k, n),
            )
            _run(
                report,
                f"spot_laplace_sum_k{k}_n{n}",
                p,
                lambda k=k, n=n: laplace_sum_check(k, n),
            )
            _run(
                report,
                f"spot_laplace_orthogonality_k{k}_n{n}",
                p,
                lambda k=k, n=n: laplace_orthogonality_check(k, n),
            )
        _run(
            report,
            "spot_tau_det_k1_n5",
            {"k": 1, "n": 5, "spot": True},
            lambda: tau_det(1, 5) == tau_det_reference(1, 5),
        )
        _run(
            report,
            "spot_m_matrix_integrality_k2_n5",
            {"k": 2, "n": 5, "spot": True},
            lambda: m_matrix(2, 5) is not None,
        )
    return report


def _closed_form_series_check(rng, tol=1e-10, cases=20):
    worst = 0.0
    for _ in range(cases):
        z = complex(rng.uniform(-1, 1), rng.uniform(-0.3, 0.3))
        h = complex(rng.uniform(-1.5, -0.5), rng.uniform(-0.2, 0.2))
        params = ParameterPoint((z,), h)
        mod = rng.choice([0.2, 0.5])
        theta = rng.uniform(-math.pi + 0.2, -0.2)
        p = BranchedP(mod * cmath.exp(1j * theta))
        index = FixedPointIndex((1,), 1)
        fs = f_series(index, params, p, "zero", tol=1e-13, max_order=60)
        got = fs.values[index]
        want = cmath.exp(1j * math.pi * z) * cmath.exp(
            h * cmath.log(1 - p.p)
        )
        worst = max(worst, abs(got - want))
    assert worst <= tol, f"closed-form deviation {worst}"
    return worst


def _gamma_reflection_check(rng, tol=1e-11, cases=1000):
    worst = 0.0
    for _ in range(cases):
        w = complex(rng.uniform(-5, 5), rng.uniform(-20, 20))
        if abs(w - round(w.real)) < 1e-3 or abs(w.imag) < 1e-3:
            continue
        lhs = gamma_c(w) * gamma_c(1 - w)
        rhs = cmath.pi / cmath.sin(cmath.pi * w)
        worst = max(worst, abs(lhs - rhs) / abs(rhs))
    assert worst <= tol, f"reflection deviation {worst}"
    return worst


def _quadrature_stability_check(seed, tol=1e-8):
    from . import integral as integral_mod

    rng = random.Random(seed)
    params = numeric_checks.sample_point(rng, 2)
    p = BranchedP(-0.5)
    f, _ = integral_mod._integrand_factory(1, params, p)
    budget = integral_mod._Budget(8_000_000)
    anchor = params.z[0] + params.h / 2.0

    def g(ys):
        return f([anchor + 1j * ys])

    t1, _, _, cut1 = integral_mod.integrate_line(g, tol * 2 * math.pi, budget)
    t2, _, _, _ = integral_mod.integrate_line(
        g, tol * 2 * math.pi, budget, max_cutoff=96.0, force_cutoff=2 * cut1
    )
    dev = float(max(abs(t1 - t2))) / (2 * math.pi)
    assert dev < tol, f"cutoff-doubling deviation {dev}"
    return dev


def numeric_suite(seed=2024, tol=1e-6, fast=False):
    report = SuiteReport(suite="numeric", seed=seed)
    rng = random.Random(seed)
    _run(
        report,
        "series_closed_form_k1_n1",
        {"cases": 20, "tol": 1e-10},
        lambda: _closed_form_series_check(random.Random(seed + 1)),
    )
    _run(
        report,
        "gamma_reflection",
        {"cases": 1000, "tol": 1e-11},
        lambda: _gamma_reflection_check(random.Random(seed + 2)),
    )
    _run(
        report,
        "quadrature_cutoff_stability",
        {"tol": 1e-8},
        lambda: _quadrature_stability_check(seed + 3),
    )
    thm52_cases = [(1, 2, 5), (1, 3, 5), (2, 3, 1)]
    if fast:
        thm52_cases = [(1, 2, 2), (1, 3, 1), (2, 3, 1)]
    for k, n, npts in thm52_cases:
        case_tol = 1e-6 if k == 1 else 1e-4
        for case in range(npts):
            point_rng = random.Random(seed + 1000 * k + 100 * n + case)
            params = numeric_checks.sample_point(point_rng, n)
            for pval in (-0.5, -2.0):
                _run(
                    report,
                    f"thm52_k{k}_n{n}_pt{case}_p{pval}",
                    {"k": k, "n": n, "p": pval, "tol": case_tol},
                    lambda k=k, n=n, params=params, pval=pval, case_tol=case_tol: _expect(
                        numeric_checks.thm52_check(
                            tuple(range(1, n + 1)), k, n, params, pval, tol=case_tol
                        )
                    ),
                )
    for k, n in ((1, 1), (1, 2), (1, 3), (2, 3)):
        case_tol = 1e-4 if (k, n) == (2, 3) else 1e-6
        point_rng = random.Random(seed + 77 + 10 * k + n)
        params = numeric_checks.sample_point(point_rng, n, need_int=False)
        _run(
            report,
            f"detM_k{k}_n{n}",
            {"k": k, "n": n, "tol": case_tol},
            lambda k=k, n=n, params=params, case_tol=case_tol: _expect(
                numeric_checks.detm_check(k, n, params, tol=case_tol)
            ),
        )
    for k, n in ((1, 2), (1, 3)):
        point_rng = random.Random(seed + 555 + 10 * k + n)
        params = numeric_checks.sample_point(point_rng, n, need_int=False)
        _run(
            report,
            f"monodromy_k{k}_n{n}",
            {"k": k, "n": n, "tol": 1e-8},
            lambda k=k, n=n, params=params: _expect(
                numeric_checks.monodromy_check(k, n, params)
            ),
        )
    return report


def run_suite(name="all", max_n=4, seed=2024, tol=1e-6, fast=False):
    """Run a named suite; returns a SuiteReport (exit-code semantics at CLI)."""
    if name == "symbolic":
        return symbolic_suite(max_n=max_n, seed=seed)
    if name == "numeric":
        return numeric_suite(seed=seed, tol=tol, fast=fast)
    if name == "all":
        rep_s = symbolic_suite(max_n=max_n, seed=seed)
        rep_n = numeric_suite(seed=seed, tol=tol, fast=fast)
        combined = SuiteReport(suite="all", seed=seed)
        combined.checks = rep_s.checks + rep_n.checks
        return combined
    raise ValueError(f"unknown suite {name!r}")
