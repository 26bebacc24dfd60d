from fractions import Fraction

import pytest

from radolab import norms
from radolab.back_and_forth import (
    STALL_NO_CANDIDATE,
    Transcript,
    init_session,
    run,
    step,
    verify,
)
from radolab.dense_sets import build_rado
from radolab.graphs import sample_graph

F = Fraction


def make_session(p=F(1, 2), seeds=(1, 2), norm=norms.L2, stages=2):
    rado = build_rado(stages)
    pts = [pt.point for pt in rado.points]
    ids = [pt.index for pt in rado.points]
    g1 = sample_graph(pts, norm, p, seeds[0], ids=ids)
    g2 = sample_graph(pts, norm, p, seeds[1], ids=ids)
    return init_session(rado, g1, g2)


def test_init_requires_matching_point_sets():
    rado = build_rado(2)
    pts = [pt.point for pt in rado.points]
    ids = [pt.index for pt in rado.points]
    g1 = sample_graph(pts, norms.L2, F(1, 2), 1, ids=ids)
    g_other = sample_graph(pts[:-1], norms.L2, F(1, 2), 2, ids=ids[:-1])
    with pytest.raises(ValueError):
        init_session(rado, g1, g_other)
    g_norm = sample_graph(pts, norms.L1, F(1, 2), 2, ids=ids)
    with pytest.raises(ValueError):
        init_session(rado, g1, g_norm)


def test_empty_session_verifies_vacuously():
    s = make_session()
    assert len(s.sigma) == 0
    assert s.direction == "forward"
    assert verify(s).all_passed


def test_first_forward_step_maps_index_one():
    s = make_session(p=F(1))
    rec = step(s)
    # s^(1) = e_1: the required image is e_j, and j = 1 is the first candidate
    assert rec.direction == "forward"
    assert rec.source_index == 1 and rec.accepted == 1
    assert s.direction == "backward"
    assert verify(s).all_passed


def test_every_accepted_step_verifies(seed_pair=(1, 2)):
    s = make_session(seeds=seed_pair)
    accepted = 0
    while True:
        rec = step(s)
        if rec.stall_reason is not None:
            break
        accepted += 1
        report = verify(s)
        assert report.all_passed, report
        if accepted >= 8:
            break
    assert accepted >= 1


def test_forward_steps_take_minimal_missing_indices():
    s = make_session(p=F(1))
    for _ in range(6):
        rec = step(s)
        if rec.stall_reason is not None:
            break
    forward_sources = [r.source_index for r in s.steps if r.direction == "forward"]
    assert forward_sources == sorted(forward_sources)
    # after n forward steps, 1..n are all in the domain
    n_forward = len([r for r in s.steps if r.direction == "forward" and r.accepted])
    assert set(range(1, n_forward + 1)) <= s.domain


def test_stall_is_a_result_with_filter_counts():
    # a lone point set immediately exhausts candidates on the backward side
    s = make_session(seeds=(5, 6))
    last = None
    for _ in range(80):
        last = step(s)
        if last.stall_reason is not None:
            break
    assert last is not None and last.stall_reason == STALL_NO_CANDIDATE
    assert last.accepted is None
    scanned = (
        last.failed_in_range
        + last.failed_support_closure
        + last.failed_point_mismatch
        + last.failed_adjacency
    )
    assert scanned == last.candidates_scanned == len(s.rado.points)
    assert last.failed_point_mismatch >= 1


def test_run_transcript_is_deterministic():
    t1 = run(make_session(), 10)
    t2 = run(make_session(), 10)
    assert t1.to_jsonl() == t2.to_jsonl()
    assert isinstance(t1, Transcript)
    with pytest.raises(ValueError):
        run(make_session(), 0)


def test_run_alternates_directions_on_accepted_steps():
    t = run(make_session(p=F(1)), 6)
    directions = [d for d, _, _ in t.accepted]
    assert directions == ["forward", "backward"] * 3


def test_p_one_adjacency_filter_never_fires():
    # with p = 1 both graphs have exactly the eligible edges, and relabeling
    # preserves distances, so candidate rejection can only come from the
    # point-mismatch filter
    s = make_session(p=F(1))
    for _ in range(10):
        rec = step(s)
        assert rec.failed_adjacency == 0
        if rec.stall_reason is not None:
            break


def test_corrupted_sigma_fails_verification():
    s = make_session(p=F(1))
    for _ in range(6):
        rec = step(s)
        if rec.stall_reason is not None:
            break
    assert len(s.sigma) >= 3
    keys = sorted(s.sigma)[:2]
    s.sigma[keys[0]], s.sigma[keys[1]] = s.sigma[keys[1]], s.sigma[keys[0]]
    report = verify(s)
    assert not report.all_passed
    assert not report.property3_graph_isomorphism.passed or not report.property2_maps_points.passed


def test_single_point_truncation_exhausts_cleanly():
    from radolab.back_and_forth import STALL_EXHAUSTED

    s = make_session(stages=1, p=F(1))
    t = run(s, 4)
    assert t.accepted == (("forward", 1, 1),)
    assert t.stalled is not None and t.stalled.stall_reason == STALL_EXHAUSTED
    assert verify(s).all_passed


def test_identity_walk_under_identical_seeds():
    # same seed on both sides gives identical graphs; the walk never stalls
    # on adjacency and extends along the diagonal
    s = make_session(seeds=(3, 3))
    t = run(s, 12)
    assert all(i == j for _, i, j in t.accepted)
    assert len(t.accepted) == 12
    assert verify(s).all_passed
