#!/usr/bin/env python3
"""Walk through each strategy on a handful of hat distributions.

Shows the rules in action: the pairing always lands exactly one correct
guess per pair, the majority strategy is perfect off balance but loses
everyone on a balanced split, and the composite keeps close to max{r, b}
everywhere.
"""

from hatguess import (
    canonical_pairing,
    composite_strategy,
    evaluate,
    majority_strategy,
    majority_target,
    make_distribution,
    pairing_strategy,
)


def show(strategy, text):
    d = make_distribution(text)
    record = evaluate(strategy, d)
    target = majority_target(d)
    print(
        f"  {text}  guesses={''.join(g.value for g in record.guesses)}  "
        f"correct={record.correct_count:2d}  max(r,b)={target}  "
        f"loss={target - record.correct_count}"
    )


def main():
    n = 8
    boards = ["RRRRRRRR", "RRRRRRBB", "RRRRBBBB", "RBRBRBRB", "BBBRBBBB"]

    print("pairing strategy: one guaranteed hit per pair, always n/2 correct")
    strategy = pairing_strategy(canonical_pairing(n))
    for text in boards:
        show(strategy, text)

    print("\nmajority strategy: perfect off balance, zero on a balanced board")
    strategy = majority_strategy(n)
    for text in boards:
        show(strategy, text)

    print("\ncomposite strategy: tracks max(r,b) with a bounded worst case")
    strategy = composite_strategy(n)
    for text in boards:
        show(strategy, text)

    print("\nthe same composite handles odd player counts (spectator reduction):")
    strategy = composite_strategy(9)
    for text in ["RRRRRRRRR", "RRRRBBBBB", "BRBRBRBRB"]:
        show(strategy, text)


if __name__ == "__main__":
    main()
