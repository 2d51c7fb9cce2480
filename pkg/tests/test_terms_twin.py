import time

import pytest

from sievecalc.report import load_reference
from sievecalc.runner import RunConfig, run_terms
from sievecalc.terms.base import (
    ASSEMBLY_WEIGHTS_TWIN,
    BoundResult,
    assemble,
)
from sievecalc.terms.twin import TWIN_TERM_IDS, term_registry_twin

REF = load_reference()["twin"]


class TestRegistry:
    def test_size_and_ids(self):
        specs = term_registry_twin()
        assert len(specs) == 17
        assert [s.id for s in specs] == list(TWIN_TERM_IDS)

    def test_directions_match_weights(self):
        specs = {s.id: s for s in term_registry_twin()}
        for tid, w in ASSEMBLY_WEIGHTS_TWIN.items():
            expected = "lower" if w > 0 else "upper"
            assert specs[tid].direction == expected, tid

    def test_encoded_zero_terms(self):
        res = run_terms(RunConfig(family="twin"), term_ids=["S'8", "S'11"])
        for tid in ("S'8", "S'11"):
            assert res[tid].value == 0.0
            assert res[tid].provenance == "theta_free"


@pytest.fixture(scope="module")
def theta_free_results():
    t0 = time.time()
    out = run_terms(RunConfig(family="twin"), term_ids=["S'9", "S'10"])
    out["_elapsed"] = time.time() - t0
    return out


@pytest.fixture(scope="module")
def g_pinned_results():
    return run_terms(RunConfig(family="twin"),
                     term_ids=["S'12", "S'13", "S'14"])


class TestThetaFree:
    def test_Sp9(self, theta_free_results):
        assert theta_free_results["S'9"].value == pytest.approx(
            REF["S'9"]["value"], abs=1e-4)

    def test_Sp10(self, theta_free_results):
        assert theta_free_results["S'10"].value == pytest.approx(
            REF["S'10"]["value"], abs=1e-4)

    def test_runtime(self, theta_free_results):
        assert theta_free_results["_elapsed"] < 2.0


class TestGPinned:
    @pytest.mark.parametrize("tid", ["S'12", "S'13", "S'14"])
    def test_reproduces_printed(self, g_pinned_results, tid):
        assert g_pinned_results[tid].value == pytest.approx(
            REF[tid]["value"], abs=1e-3)


def _fake(tid, value, direction, source="piecewise:bundled"):
    return BoundResult(id=tid, value=value, direction=direction,
                       est_abs_error=0.0, provenance="theta_conditional",
                       chosen_k=None, clamp_events=0, oob_events=0,
                       provider_source=source)


def _printed_results():
    return {tid: _fake(tid, REF[tid]["value"], REF[tid]["direction"])
            for tid in ASSEMBLY_WEIGHTS_TWIN}


class TestAssembly:
    @pytest.mark.xfail(
        strict=True,
        reason="the printed per-term constants recombine to 5.103889, not "
               "the printed 5.1036; at the stated 5e-5 tolerance the "
               "assembly identity does not hold for this family")
    def test_printed_constants_recombine_strict(self):
        res = assemble(_printed_results(), ASSEMBLY_WEIGHTS_TWIN)
        assert res.value == pytest.approx(1.2759, abs=5e-5)

    def test_printed_constants_recombine_documented(self):
        # The actual recombination of the printed constants: 5.103889 / 4.
        res = assemble(_printed_results(), ASSEMBLY_WEIGHTS_TWIN)
        assert res.pre_division == pytest.approx(5.103889, abs=1e-6)
        assert res.value == pytest.approx(1.2759, abs=5e-4)
