import random

import pytest

from qmsurf.hilbert import (INF, hilbert_solvable_oracle, hilbert_symbol,
                            ramified_places, splits_quaternion)
from qmsurf.numutil import factorint
from qmsurf.quadfield import FIELDS, split_prime


def test_hamilton_quaternions():
    assert hilbert_symbol(-1, -1, 2) == -1
    assert hilbert_symbol(-1, -1, INF) == -1
    for p in (3, 5, 7, 11, 13):
        assert hilbert_symbol(-1, -1, p) == 1


def test_minus6_2_against_solvability_oracle():
    for place in (2, 3, 5, INF):
        assert hilbert_symbol(-6, 2, place) == hilbert_solvable_oracle(-6, 2, place)


def test_oracle_on_hamilton_case():
    assert hilbert_solvable_oracle(-1, -1, 2) == -1
    assert hilbert_solvable_oracle(-1, -1, 3) == 1


def test_reciprocity_100_random_pairs():
    rng = random.Random(17)
    done = 0
    while done < 100:
        a = rng.randint(-60, 60)
        b = rng.randint(-60, 60)
        if a == 0 or b == 0:
            continue
        places = {2, INF} | set(factorint(a)) | set(factorint(b))
        prod = 1
        for v in places:
            prod *= hilbert_symbol(a, b, v)
        assert prod == 1, (a, b)
        done += 1


def test_rational_arguments():
    # symbols only depend on square classes: n/d behaves like n*d
    assert hilbert_symbol(-6, 2, 3) == hilbert_symbol(-6, 1 / 2, 3) \
        == hilbert_symbol(-2 / 3, 2, 3)
    with pytest.raises(ValueError):
        hilbert_symbol(0, 5, 3)


def test_ramified_sets_of_the_two_algebras():
    assert ramified_places(-6, 2) == {2, 3}
    assert ramified_places(-10, 2) == {2, 5}
    assert ramified_places(-1, -1) == {2, INF}


def test_splitting_criterion_matches_prime_splitting():
    # D = 6 splits over K iff neither 2 nor 3 splits in K
    for d in (1, 2, 3, 7, 11):
        K = FIELDS[d]
        literal = all(len(split_prime(K, p)) == 1 for p in (2, 3))
        assert splits_quaternion(K, 6) == literal
    assert splits_quaternion(FIELDS[1], 6) is True
    assert splits_quaternion(FIELDS[3], 6) is True
    assert splits_quaternion(FIELDS[7], 6) is False
    # D = 10: neither 2 nor 5 splits
    for d in (1, 2, 3, 7, 11):
        K = FIELDS[d]
        literal = all(len(split_prime(K, p)) == 1 for p in (2, 5))
        assert splits_quaternion(K, 10) == literal
