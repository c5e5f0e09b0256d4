"""Scoring for the standard 10-item usability scale.

Odd items count up from 1, even items count down from 5; the adjusted sum is
stretched to 0-100: score = 2.5 * (sum_odd(a - 1) + sum_even(5 - a)).
"""

from __future__ import annotations

from ..errors import MissingItems, OutOfScale


def compute_sus(answers: dict[int, int]) -> float:
    """``answers`` maps item index (1..10) to a response on the 1..5 scale."""
    missing = [i for i in range(1, 11) if i not in answers]
    if missing:
        raise MissingItems(f"missing usability items: {missing}")
    extra = [i for i in answers if not 1 <= i <= 10]
    if extra:
        raise MissingItems(f"unexpected item indices: {extra}")
    total = 0
    for index, answer in answers.items():
        if not 1 <= answer <= 5:
            raise OutOfScale(f"item {index} answered {answer}, outside 1..5")
        total += (answer - 1) if index % 2 == 1 else (5 - answer)
    return 2.5 * total


def sus_answers_for_score(score: float) -> dict[int, int]:
    """One valid answer set yielding ``score`` exactly (for fixtures).

    Distributes the adjusted sum round-robin across items, then converts back
    to raw 1..5 responses.
    """
    target = score / 2.5
    if target != int(target) or not 0 <= target <= 40:
        raise ValueError(f"score {score} is not reachable on the 0..100 grid")
    adjusted = [0] * 10
    remaining = int(target)
    i = 0
    while remaining > 0:
        if adjusted[i % 10] < 4:
            adjusted[i % 10] += 1
            remaining -= 1
        i += 1
    return {
        index: (adj + 1 if index % 2 == 1 else 5 - adj)
        for index, adj in ((k + 1, adjusted[k]) for k in range(10))
    }
