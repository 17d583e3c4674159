import math

import pytest

import core.percolation.estimate as estimate_module
from core.errors import BudgetExceededError, DomainError, MarginExhaustedError
from core.formulas import arc_event_probability
from core.percolation import ArcSampleEvaluator, estimate_arc_probability, estimate_arc_sweep
from core.montecarlo import sample_stream


def test_sweep_returns_both_estimators_per_arc(tiny_lattice):
    thetas = [math.pi / 2, math.pi]
    sweep = estimate_arc_sweep(tiny_lattice.delta, thetas, 300, 1, lattice=tiny_lattice)
    assert list(sweep) == thetas
    for indicator, x_stat in sweep.values():
        assert indicator.kind == "bernoulli"
        assert indicator.n == 300 and indicator.rejected == 0
        assert 0.0 <= x_stat.p_hat <= 1.0
        # same samples, so the two only differ by noise
        gap = abs(indicator.p_hat - x_stat.p_hat)
        assert gap < 4 * math.hypot(indicator.std_err, x_stat.std_err) + 0.02
    assert sweep[math.pi / 2][0].p_hat <= sweep[math.pi][0].p_hat


def test_sweep_is_independent_of_workers(tiny_lattice):
    kwargs = dict(lattice=tiny_lattice)
    one = estimate_arc_sweep(0.3, [math.pi], 200, 4, workers=1, chunk_size=16, **kwargs)
    many = estimate_arc_sweep(0.3, [math.pi], 200, 4, workers=4, chunk_size=16, **kwargs)
    assert one == many


def test_evaluator_matches_single_arc_detectors(tiny_lattice):
    evaluator = ArcSampleEvaluator(tiny_lattice, [math.pi / 2, 3 * math.pi / 2])
    outcome = evaluator(0, sample_stream(9, 0))
    assert outcome.redraws == 0
    assert len(outcome.values) == 4
    assert set(outcome.values[1::2]) <= {0.0, 0.5, 1.0}


def test_redraw_budget(micro_lattice, monkeypatch):
    def exhausted(*args, **kwargs):
        raise MarginExhaustedError("forced", code="margin_exhausted")

    monkeypatch.setattr(estimate_module, "nested_chain", exhausted)
    with pytest.raises(BudgetExceededError) as err:
        estimate_arc_sweep(micro_lattice.delta, [math.pi], 100, 0, lattice=micro_lattice)
    assert err.value.code == "redraw_budget"


def test_margin_is_widened_on_exhaustion(micro_lattice, monkeypatch):
    real = estimate_module.nested_chain

    def thin_margin_fails(lattice, coloring, **kwargs):
        if lattice.margin == 0.0:
            raise MarginExhaustedError("forced", code="margin_exhausted")
        return real(lattice, coloring, **kwargs)

    monkeypatch.setattr(estimate_module, "nested_chain", thin_margin_fails)
    evaluator = ArcSampleEvaluator(micro_lattice, [math.pi])
    outcome = evaluator(0, sample_stream(0, 0))
    assert outcome.redraws == 1
    assert evaluator.lattice_at(1).margin == micro_lattice.delta


def test_theta_must_be_in_range(tiny_lattice):
    with pytest.raises(DomainError):
        estimate_arc_sweep(0.3, [0.0], 100, 0, lattice=tiny_lattice)


def test_single_arc_pair(tiny_lattice):
    indicator, x_stat = estimate_arc_probability(0.3, math.pi, 150, 2, lattice=tiny_lattice)
    assert indicator.n == x_stat.n == 150


@pytest.mark.slow
def test_half_turn_near_one_half():
    indicator, x_stat = estimate_arc_probability(1.0 / 30.0, math.pi, 4000, 0)
    assert abs(indicator.p_hat - 0.5) < 4 * indicator.std_err + 0.03
    assert abs(x_stat.p_hat - arc_event_probability(math.pi)) < 4 * x_stat.std_err + 0.03
