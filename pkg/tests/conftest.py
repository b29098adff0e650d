import pytest

from qmsurf.cli import bundled_newform
from qmsurf.counting import trace_table
from qmsurf.curves import EXAMPLES
from qmsurf.quadfield import (FIELDS, parse_element, prime_from_generator,
                              split_prime)
from qmsurf.rayclass import modulus, ray_class_group


@pytest.fixture(scope="session")
def tables3000():
    """Trace tables to norm 3000 (no square certificates) for c1..c4."""
    return {key: trace_table(ex.curve, bound=3000, square_check_bound=0)
            for key, ex in EXAMPLES.items()}


@pytest.fixture(scope="session")
def tables_sq500():
    """Tables to norm 500 with the F_{q^2} square certificate everywhere."""
    return {key: trace_table(ex.curve, bound=500, square_check_bound=500)
            for key, ex in EXAMPLES.items()}


@pytest.fixture(scope="session")
def forms():
    return {key: bundled_newform(ex.newform_label)
            for key, ex in EXAMPLES.items()}


@pytest.fixture(scope="session")
def rcg_paper():
    """The ray class group mod p2^3 * p13 * p19 over Q(sqrt(-3)), where the
    p13/p19 factors are the conductor primes of the c2 curve."""
    K = FIELDS[3]
    p2 = split_prime(K, 2)[0]
    p13 = prime_from_generator(K, parse_element("3+w", K).as_element())
    p19 = prime_from_generator(K, parse_element("-5+2*w", K).as_element())
    return ray_class_group(K, modulus(K, [(p2, 3), (p13, 1), (p19, 1)]))


@pytest.fixture(scope="session")
def paper_span_set():
    """S = both primes over 7, the non-conductor primes over 13 and 19, and
    the inert prime over 5."""
    K = FIELDS[3]
    p7a, p7b = split_prime(K, 7)
    p13_2 = prime_from_generator(K, parse_element("3+w", K).as_element()).conjugate()
    p19_2 = prime_from_generator(K, parse_element("-5+2*w", K).as_element()).conjugate()
    p5 = split_prime(K, 5)[0]
    return [p7a, p7b, p13_2, p19_2, p5]
