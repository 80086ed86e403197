import math

import numpy as np
import pytest

from tord.analyze import (
    HBAR_EV_S,
    coherence_scale,
    commutator_score,
    initcond_check,
    ordering_report,
    reciprocity_check,
)
from tord.corpus import degenerate_constant, detuned_constant, detuned_gaussian, kick_transfer, two_level
from tord.errors import UsageError
from tord.propagate import GridSpec
from tord.system import BasisSpec, CouplingTerm, Envelope, SystemSpec

# Frozen pipeline values for the detuned benchmark E = (0, 1), 0.2 σx on [0, 5].
# Closed-form oracles: ordering error 0.3243607169430301, ‖ΔT‖ = 0.04 √2 (5 - sin 5).
BENCH_ORDERING_ERROR = 0.32436071498393343
BENCH_DELTA_T_NORM = 0.33708766105531457
BENCH_COMMUTATOR_SCORE = 0.1130188473567345


def test_benchmark_report_regression():
    spec, grid = detuned_constant()
    rep = ordering_report(spec, grid)
    assert rep.ordering_error == pytest.approx(BENCH_ORDERING_ERROR, abs=1e-9)
    assert rep.delta_t_norm == pytest.approx(BENCH_DELTA_T_NORM, abs=1e-9)
    assert rep.commutator_score == pytest.approx(BENCH_COMMUTATOR_SCORE, abs=1e-9)
    assert not rep.fully_degenerate


def test_benchmark_commutator_score_closed_form():
    # ‖[V(a), V(b)]‖ = 0.04 · 2√2 |sin(a - b)|; the 16-point lattice on [0, 5] has spacing 1/3.
    spec, grid = detuned_constant()
    t = np.linspace(0, 5, 16)
    best = max(abs(math.sin(a - b)) for a in t for b in t)
    assert commutator_score(spec, grid, 16) == pytest.approx(0.08 * math.sqrt(2) * best, abs=1e-15)


def test_degenerate_report():
    spec, grid = degenerate_constant()
    rep = ordering_report(spec, grid)
    assert rep.commutator_score < 1e-12 and rep.ordering_error < 1e-8 and rep.fully_degenerate


def test_zero_interaction_report():
    spec = two_level((0, 1), None)
    rep = ordering_report(spec, GridSpec(0, 3, 8))
    assert rep.ordering_error < 1e-12 and rep.commutator_score == 0 and rep.delta_t_norm < 1e-12


def test_pair_samples_validated():
    spec, grid = degenerate_constant()
    with pytest.raises(UsageError):
        commutator_score(spec, grid, 1)


def test_commuting_implies_no_ordering(corpus_case):
    _, spec, grid = corpus_case
    rep = ordering_report(spec, grid)
    assert rep.ordering_error >= 0 and rep.delta_t_norm >= 0 and rep.commutator_score >= 0
    if rep.commutator_score <= 1e-12:
        assert rep.ordering_error <= 1e-8
        assert rep.delta_t_norm <= 1e-10


def test_ordering_error_invariant_under_energy_shift():
    base = ordering_report(*detuned_gaussian()).ordering_error
    env = Envelope.gaussian(0.2, 5.0, 1.0)
    shifted = SystemSpec(BasisSpec.from_energies([3.25, 4.25]), [CouplingTerm(env, np.array([[0, 1], [1, 0]]))])
    assert abs(ordering_report(shifted, GridSpec(0, 10, 64)).ordering_error - base) < 1e-10


def test_coherence_scale_hydrogen():
    cs = coherence_scale(4.37e-6)
    assert cs.delta_t == pytest.approx(7.54e-11, rel=1e-2)
    assert cs.delta_l == pytest.approx(2.26, rel=1e-2)


def test_coherence_scale_scaling_and_inversion():
    one, two = coherence_scale(1e-5), coherence_scale(2e-5)
    assert two.delta_t == one.delta_t / 2 and two.delta_l == one.delta_l / 2
    assert coherence_scale(3.291059785e-16).delta_t == pytest.approx(1.0, rel=1e-9)
    for de in (1e-9, 4.37e-6, 13.6):
        assert coherence_scale(de).delta_t * 2 * de / HBAR_EV_S == pytest.approx(1.0, abs=1e-12)
    with pytest.raises(UsageError):
        coherence_scale(0.0)


def test_initcond_examples():
    far = two_level((0, 0), Envelope.gaussian(1.0, 8.0, 0.5))
    assert initcond_check(far, 0.0) < 1e-8
    assert initcond_check(two_level((0, 0), Envelope.constant(0.25)), 0.0) < 1e-6
    spec, grid = detuned_constant()
    assert initcond_check(spec, grid.t1) < 1e-6
    spec, _ = detuned_gaussian()
    assert initcond_check(spec, 3.0) < 1e-6
    with pytest.raises(UsageError):
        initcond_check(SystemSpec(BasisSpec.from_energies([0, 1, 2])), 0.0)


def test_reciprocity_examples():
    assert reciprocity_check(two_level((0, 1), None), GridSpec(0, 2, 4)) == 0
    assert reciprocity_check(*kick_transfer()) < 1e-12
    assert reciprocity_check(*detuned_gaussian()) < 1e-8
