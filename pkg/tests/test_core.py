"""Core game machinery: distributions, views, scoring, no-peek checks."""

import pytest

from hatguess import (
    Color,
    ContractError,
    EncodingError,
    HatDistribution,
    StrategyProfile,
    VisibleView,
    canonical_pairing,
    composite_strategy,
    evaluate,
    majority_strategy,
    majority_target,
    make_distribution,
    pairing_strategy,
    verify_no_peek,
)


def test_color_complement():
    assert Color.RED.opposite() is Color.BLUE
    assert Color.BLUE.opposite() is Color.RED
    assert str(Color.RED) == "R"


def test_make_distribution_from_text():
    d = make_distribution("RRBB")
    assert d.n == 4
    assert [d.color_of(i) for i in (1, 2)] == [Color.RED, Color.RED]
    assert [d.color_of(i) for i in (3, 4)] == [Color.BLUE, Color.BLUE]
    assert d.red_count == 2 and d.blue_count == 2


def test_make_distribution_smallest():
    d = make_distribution("R")
    assert d.n == 1 and d.red_count == 1


def test_make_distribution_alternating():
    d = make_distribution("RBRBRB")
    assert d.red_count == 3 and d.blue_count == 3


def test_make_distribution_from_colors():
    d = make_distribution([Color.RED, Color.BLUE, Color.RED])
    assert d.to_text() == "RBR"


@pytest.mark.parametrize("bad", ["", "RRXB", "rb", "RB B"])
def test_make_distribution_rejects_bad_text(bad):
    with pytest.raises(EncodingError):
        make_distribution(bad)


def test_make_distribution_rejects_bad_sequences():
    with pytest.raises(EncodingError):
        make_distribution([])
    with pytest.raises(EncodingError):
        make_distribution([Color.RED, "R"])


def test_text_round_trip_exhaustive():
    # decode(encode(omega)) == omega for every omega up to n = 14
    for n in range(1, 15):
        for mask in range(1 << n):
            d = HatDistribution(n, mask)
            assert HatDistribution.from_text(d.to_text()) == d


def test_flip_and_count():
    d = make_distribution("RRBB")
    assert d.flip(1).to_text() == "BRBB"
    assert d.flip(1).flip(1) == d
    assert d.count_red(0b0011) == 2
    assert d.count_red(0b1100) == 0
    with pytest.raises(ContractError):
        d.flip(5)
    with pytest.raises(ContractError):
        d.color_of(0)


@pytest.mark.parametrize(
    "text,expected", [("RRBB", 2), ("RRRB", 3), ("BBBBBB", 6), ("R", 1)]
)
def test_majority_target(text, expected):
    assert majority_target(make_distribution(text)) == expected


def test_view_hides_own_hat():
    d = make_distribution("RRBB")
    v = VisibleView(d, 3)
    assert v.color_of(1) is Color.RED
    assert v.color_of(4) is Color.BLUE
    with pytest.raises(ContractError):
        v.color_of(3)
    with pytest.raises(ContractError):
        v.count_red(0b0100)  # mask contains the observer
    assert v.count_red(0b0011) == 2
    assert v.visible_red_count() == 2


def test_view_observer_range():
    d = make_distribution("RB")
    with pytest.raises(ContractError):
        VisibleView(d, 0)
    with pytest.raises(ContractError):
        VisibleView(d, 3)


def test_evaluate_pairing_on_rb():
    # the pair rule forces: player 1 calls B (partner's color, wrong),
    # player 2 calls B (opposite of partner's red, right)
    strategy = pairing_strategy(canonical_pairing(2))
    record = evaluate(strategy, make_distribution("RB"))
    assert record.guesses == (Color.BLUE, Color.BLUE)
    assert record.correct_count == 1
    assert record.correct_set == frozenset({2})


def test_evaluate_majority_balanced_all_wrong():
    record = evaluate(majority_strategy(4), make_distribution("RRBB"))
    assert record.correct_count == 0
    assert record.correct_set == frozenset()


def test_evaluate_majority_imbalanced():
    record = evaluate(majority_strategy(4), make_distribution("RRRB"))
    assert record.correct_count == 3
    assert record.correct_set == frozenset({1, 2, 3})


def test_evaluate_dimension_mismatch():
    with pytest.raises(ContractError):
        evaluate(majority_strategy(4), make_distribution("RRB"))


def test_evaluate_is_pure():
    strategy = composite_strategy(6)
    d = make_distribution("RBRBRB")
    assert evaluate(strategy, d) == evaluate(strategy, d)


def test_correct_count_bounds():
    strategy = majority_strategy(5)
    for mask in range(1 << 5):
        record = evaluate(strategy, HatDistribution(5, mask))
        assert 0 <= record.correct_count <= 5
        assert record.correct_count == len(record.correct_set)
        wrong = 5 - record.correct_count
        assert record.correct_count + wrong == 5


def test_guess_record_json():
    record = evaluate(pairing_strategy(canonical_pairing(2)), make_distribution("RR"))
    assert record.to_json_dict() == {
        "guesses": "RB",
        "correct_count": 1,
        "correct_set": [1],
    }


def test_verify_no_peek_pairing_clean():
    strategy = pairing_strategy(canonical_pairing(6))
    for mask in range(1 << 6):
        assert verify_no_peek(strategy, HatDistribution(6, mask)) == []


def test_verify_no_peek_flags_cheater():
    # a deliberately broken profile that answers with the player's own color
    cheater = StrategyProfile(
        2, lambda observer, view: view.distribution.color_of(observer), "cheater"
    )
    assert verify_no_peek(cheater, make_distribution("RB")) == [1, 2]


def test_verify_no_peek_composite_exhaustive_n8():
    strategy = composite_strategy(8)
    for mask in range(1 << 8):
        assert verify_no_peek(strategy, HatDistribution(8, mask)) == []
