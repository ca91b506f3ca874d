"""Sustainability scoring: bucket rules, cohort means, reference totals."""

import json

import pytest

from salientvd.errors import EmptyCohort, MixedCohort
from salientvd.scoring import (
    ModelProfile,
    ScoreCard,
    format_ranking,
    load_reference_profiles,
    parse_profiles,
    rank,
    ranking_to_json,
    read_profiles,
    score_accuracy,
    score_cards,
    score_loss,
    score_time,
)


def profile(name="m", frames=6, time_ms=100.0, loss=0.05, acc=96.0, params=1.0, layers=10):
    return ModelProfile(name, frames, params, layers, time_ms, loss, acc)


# --- bucket rules ---------------------------------------------------------


@pytest.mark.parametrize(
    "loss,mark", [(0.0, 1), (0.0999, 1), (0.1, 0), (0.15, 0), (0.1999, 0), (0.2, -1), (0.9, -1)]
)
def test_loss_buckets_default(loss, mark):
    assert score_loss(loss) == mark


def test_loss_buckets_strict_boundaries():
    # strict rule: 0 only on the open interval (0.1, 0.2), so both
    # boundaries fall through to the punishment mark
    assert score_loss(0.1, strict=True) == -1
    assert score_loss(0.15, strict=True) == 0
    assert score_loss(0.2, strict=True) == -1
    assert score_loss(0.05, strict=True) == 1


@pytest.mark.parametrize(
    "acc,mark", [(100.0, 1), (95.01, 1), (95.0, 0), (92.0, 0), (90.01, 0), (90.0, -1), (50.0, -1)]
)
def test_accuracy_buckets_default(acc, mark):
    assert score_accuracy(acc) == mark


def test_accuracy_buckets_strict_boundaries():
    assert score_accuracy(95.0, strict=True) == -1
    assert score_accuracy(90.0, strict=True) == -1
    assert score_accuracy(92.0, strict=True) == 0
    assert score_accuracy(96.0, strict=True) == 1


def test_bucket_input_validation():
    with pytest.raises(ValueError):
        score_loss(-0.1)
    with pytest.raises(ValueError):
        score_accuracy(101.0)


def test_time_mark_against_cohort_mean():
    cohort = [profile("a", time_ms=50.0), profile("b", time_ms=150.0)]
    assert score_time(cohort) == [1, 0]  # mean 100: strict beat only


def test_time_mark_equal_to_mean_is_zero():
    cohort = [profile("a", time_ms=100.0), profile("b", time_ms=100.0)]
    assert score_time(cohort) == [0, 0]


def test_time_empty_cohort():
    with pytest.raises(EmptyCohort):
        score_time([])


def test_score_card_total():
    assert ScoreCard(1, 0, -1).total == 0
    assert ScoreCard(1, 1, 1).total == 3


# --- reference table ------------------------------------------------------

EXPECTED_15 = {
    "VGG16": 3,
    "VGG19": 1,
    "ResNet50": 3,
    "ResNet101": -1,
    "DenseNet121": 1,
    "EfficientNetB0": -1,
    "InceptionV3": 1,
}
EXPECTED_6 = {
    "VGG16": 3,
    "VGG19": 2,
    "ResNet50": 2,
    "ResNet101": 2,
    "DenseNet121": 2,
    "EfficientNetB0": -1,
    "InceptionV3": 3,
}


def cohort(frames):
    return [p for p in load_reference_profiles() if p.input_frames == frames]


def test_reference_totals_15_frame():
    totals = {p.name: c.total for p, c in rank(cohort(15))}
    assert totals == EXPECTED_15


def test_reference_totals_6_frame():
    totals = {p.name: c.total for p, c in rank(cohort(6))}
    assert totals == EXPECTED_6


def test_reference_time_means():
    times15 = [p.time_ms for p in cohort(15)]
    assert sum(times15) / len(times15) == pytest.approx(170.442857, abs=1e-6)
    times6 = [p.time_ms for p in cohort(6)]
    assert sum(times6) / len(times6) == pytest.approx(159.885714, abs=1e-6)


def test_ranking_order_15_frame():
    # both leaders total 3; ResNet50 (137.5 ms) beats VGG16 (154.3 ms) on time
    names = [p.name for p, _ in rank(cohort(15))]
    assert names[:2] == ["ResNet50", "VGG16"]
    assert names[-1] == "ResNet101"  # total -1, slower than EfficientNetB0


def test_ranking_order_6_frame_leaders():
    names = [p.name for p, _ in rank(cohort(6))]
    assert set(names[:2]) == {"InceptionV3", "VGG16"}
    assert names[0] == "InceptionV3"  # 151.7 ms beats 157.3 ms on the tie


def test_rank_rejects_mixed_cohort():
    with pytest.raises(MixedCohort):
        rank(load_reference_profiles())
    assert len(rank(load_reference_profiles(), allow_mixed=True)) == 14


def test_rank_empty():
    with pytest.raises(EmptyCohort):
        rank([])


def test_tie_break_chain():
    a = profile("zeta", time_ms=50.0, loss=0.05, acc=96.0)
    b = profile("alpha", time_ms=50.0, loss=0.05, acc=96.0)
    c = profile("mid", time_ms=50.0, loss=0.09, acc=96.0)
    ranked = [p.name for p, _ in rank([a, b, c])]
    assert ranked == ["alpha", "zeta", "mid"]  # loss, then name


# --- profile I/O ----------------------------------------------------------


def test_profile_validation():
    with pytest.raises(ValueError):
        profile(time_ms=0.0)
    with pytest.raises(ValueError):
        profile(acc=-1.0)
    with pytest.raises(ValueError):
        profile(loss=-0.5)


def test_parse_profiles_csv_and_json_agree():
    csv_text = (
        "name,input_frames,params_millions,num_layers,time_ms,val_loss,accuracy_pct\n"
        "A,6,1.5,10,100.0,0.05,96\n"
    )
    json_text = json.dumps(
        [
            {
                "name": "A",
                "input_frames": 6,
                "params_millions": 1.5,
                "num_layers": 10,
                "time_ms": 100.0,
                "val_loss": 0.05,
                "accuracy_pct": 96,
            }
        ]
    )
    assert parse_profiles(csv_text, "csv") == parse_profiles(json_text, "json")


def test_read_profiles_by_extension(tmp_path):
    (tmp_path / "p.json").write_text(
        json.dumps([profile().to_dict()]), "utf-8"
    )
    loaded = read_profiles(tmp_path / "p.json")
    assert loaded == [profile()]


def test_format_ranking_alignment():
    text = format_ranking(rank(cohort(6)))
    lines = text.splitlines()
    assert len(lines) == 8
    assert lines[0].startswith("model")
    assert "+3" in lines[1]


def test_ranking_to_json_fields():
    doc = json.loads(ranking_to_json(rank(cohort(6))))
    assert doc[0]["name"] == "InceptionV3"
    assert doc[0]["total"] == 3
    assert {"m_time", "m_loss", "m_acc"} <= set(doc[0])


def test_score_cards_strict_flag_changes_boundaries():
    edge = [profile("edge", time_ms=10.0, loss=0.1, acc=95.0), profile("other", time_ms=30.0)]
    default_card = score_cards(edge)[0]
    strict_card = score_cards(edge, strict=True)[0]
    assert (default_card.m_loss, default_card.m_acc) == (0, 0)
    assert (strict_card.m_loss, strict_card.m_acc) == (-1, -1)


def test_time_invariant_under_scaling():
    cohort = [profile("a", time_ms=50.0), profile("b", time_ms=80.0), profile("c", time_ms=200.0)]
    scaled = [profile(p.name, time_ms=p.time_ms * 7.5) for p in cohort]
    assert score_time(cohort) == score_time(scaled)


def test_two_distinct_times_guarantee_a_winner():
    cohort = [profile("a", time_ms=99.0), profile("b", time_ms=100.0)]
    assert 1 in score_time(cohort)


def test_single_model_cohort_never_beats_itself():
    assert score_time([profile("solo")]) == [0]


def test_efficientnet_worst_in_both_cohorts():
    for frames in (15, 6):
        ranked = rank(cohort(frames))
        worst_total = min(c.total for _, c in ranked)
        eff = next(c for p, c in ranked if p.name == "EfficientNetB0")
        assert eff.total == worst_total == -1
