"""The eleven acceptance criteria, one test each.

Run standalone with ``python tests/test_acceptance.py``; under pytest the
collected pass/fail lines are printed in the terminal summary.
"""
import time

import pytest

from heatcocycle import suites

RESULTS: dict = {}


def _criterion(k: int, title: str, limit: float, run, requirements=()):
    """Run the checks for criterion k, record one summary line and assert.

    ``run`` returns a list of check dicts.  ``requirements`` holds
    (label, bool) pairs for the sample-count and coverage demands.
    """
    t = time.perf_counter()
    checks = run()
    seconds = time.perf_counter() - t
    failed = [c["name"] for c in checks if not c["passed"]]
    failed += [label for label, ok in requirements if not ok]
    if seconds > limit:
        failed.append(f"runtime {seconds:.1f}s over {limit:.0f}s")
    cases = sum(c["cases"] for c in checks)
    verdict = "PASS" if not failed else "FAIL"
    line = f"criterion {k:2d}: {verdict}  {title}  ({cases} cases, {seconds:.1f}s)"
    if failed:
        line += "  failing: " + "; ".join(failed)
    RESULTS[k] = line
    print(line)
    assert not failed, line
    return checks


def test_criterion_01_trace_axioms():
    def run():
        return [suites.check_trace_of_functions(count=25), suites.check_trace_property(count=25)]
    funcs, prop = _criterion(1, "trace of functions and Tr(DX) = Tr(XD)", 60, run)
    assert funcs["cases"] >= 50 and prop["cases"] >= 50
    assert funcs["nonzero_cases"] > 0


def test_criterion_02_commutator_contraction():
    checks = _criterion(2, "commutator contractions vanish, |alpha|, |beta| <= 4, n <= 2", 60,
                        lambda: [suites.check_commutator_contraction(max_order=4)])
    assert checks[0]["cases"] > 0


def test_criterion_03_perturbed_laplacian():
    def run():
        return [suites.check_perturbed_laplacian(count=10)]
    (c,) = _criterion(3, "trace unchanged by perturbed Laplacians", 120, run)
    assert c["cases"] >= 10 and c["nonzero_cases"] > 0


def test_criterion_04_dirac_identities():
    def run():
        return [suites.check_dirac_identities(per_dim=5, dims=(2, 3))]
    (c,) = _criterion(4, "Dirac square identities on random connections, n = 2, 3", 120, run)
    assert c["cases"] >= 10 and c["curved_connections"] > 0


def test_criterion_05_delta_closed():
    (c,) = _criterion(5, "STr(delta X) = 0", 60, lambda: [suites.check_delta_closed(count=30)])
    assert c["cases"] >= 30


def test_criterion_06_negative_order():
    (c,) = _criterion(6, "STr vanishes in negative symbol order", 60,
                      lambda: [suites.check_negative_order(count=30)])
    assert c["cases"] >= 30


def test_criterion_07_schur_todd():
    def run():
        return [suites.check_todd_contraction(dims=(1, 2, 3)), suites.check_schur_vanishing(dims=(1, 2, 3))]
    todd, _ = _criterion(7, "heat contraction against R equals eps^-n X Todd(eps^2 R)", 300, run)
    assert todd["lowest_certified_order"] >= 2 * 3 + 2


def test_criterion_08_main_theorem():
    (c,) = _criterion(8, "JLO component equals the de Rham value", 1800,
                      lambda: [suites.check_main_theorem()])
    labels = c["values"]
    assert sum(k.startswith("n1-") for k in labels) >= 10
    assert sum(k.startswith("n2-p1") for k in labels) >= 3
    assert sum(k.startswith("n2-p3") for k in labels) >= 3
    assert c["nonzero_cases"] > 0


def test_criterion_09_cocycle():
    (c,) = _criterion(9, "(b + B) residuals of the JLO family vanish", 600,
                      lambda: [suites.check_cocycle(count=20)])
    assert c["cases"] >= 20 and c["cases_with_nonzero_terms"] > 0


def test_criterion_10_naive_jlo():
    holder = {}

    def run():
        holder["c"] = suites.check_naive_jlo()
        return [holder["c"]]
    _criterion(10, "naive JLO vanishes in odd degrees", 600, run)
    c = holder["c"]
    even = c["even_degree_values"]
    RESULTS[10] += (f"  [even degrees: {len(even)} values, all zero]" if c["even_degree_all_zero"]
                    else f"  [even degrees: nonzero values {[e['value'] for e in even if e['value'] != '0']}]")


def test_criterion_11_pointwise_density():
    def run():
        return [suites.check_pointwise_density(count=10), suites.check_pointwise_jlo()]
    dens, _ = _criterion(11, "integrated pointwise densities equal global supertraces", 300, run)
    assert dens["nonzero_supertraces"] >= 10
    assert dens["control_without_heat_correction_differs"] > 0


if __name__ == "__main__":
    import sys

    sys.exit(pytest.main([__file__, "-q", "-s"]))
