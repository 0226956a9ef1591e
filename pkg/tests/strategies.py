from hypothesis import strategies as st

from mgl.free import reduce


def raw_letters(rank, max_len=12):
    nonzero = st.integers(-rank, rank).filter(lambda x: x != 0)
    return st.lists(nonzero, max_size=max_len)


def reduced_words(rank, max_len=12):
    return raw_letters(rank, max_len).map(lambda raw: reduce(raw, rank))
