import pytest

from relext import defects as D
from relext import oracle as O
from relext import relative as R


@pytest.mark.parametrize("name,additive,closed", [
    ("A2", 2, 2), ("A3-RR", 13, 8), ("A3-RL", 13, 8), ("stmod3", 7, 4), ("stmod4", 42, 8)])
def test_counts(name, additive, closed):
    from relext import verify
    cat = verify.instance(name)
    rep = O.oracle_closed(cat)
    assert len(rep.additive) == additive
    assert len(rep.closed) == closed == 2 ** len(cat.non_projectives)
    assert set(rep.closed) == {e.subfunctor for e in D.enumerate_closed(cat)}


def test_oracle_lists_are_subfunctors(small):
    rep = O.oracle_closed(small)
    assert len(set(rep.additive)) == len(rep.additive)
    for f in rep.additive:
        assert R.validate_subfunctor(f).ok


def test_additive_independent_of_closure(a3):
    # every additive subfunctor is generated by its own elements
    for f in O.enumerate_additive_subfunctors(a3):
        gens = [a3.ext_elem(a3.obj(a3.name(j)), a3.obj(a3.name(i)), v)
                for (j, i), s in f.spaces.items() for v in s.elements()]
        assert R.closure(a3, gens) == f


def test_cap(st4):
    assert O.search_space_size(st4) == 1280
    with pytest.raises(O.OracleTooLarge):
        O.enumerate_additive_subfunctors(st4, cap=100)
