"""Counter-addressed random streams."""

import numpy as np
import pytest

from kinbound.errors import DomainError
from kinbound.utils.rng import CounterStream, counter_generator


class TestCounterStream:
    """Partition-independent random words."""

    @pytest.mark.parametrize(("start", "count"), [(0, 5), (3, 9), (4, 4), (17, 1)])
    def test_raw_when_sliced_then_matches_full_draw(self, start: int, count: int) -> None:
        stream = CounterStream(seed=11, stream=2)
        full = stream.raw(0, 32)
        assert np.array_equal(stream.raw(start, count), full[start : start + count])

    def test_raw_when_chunked_then_concatenation_equal(self) -> None:
        stream = CounterStream(5)
        chunks = np.concatenate([stream.raw(0, 7), stream.raw(7, 6), stream.raw(13, 11)])
        assert np.array_equal(chunks, stream.raw(0, 24))

    def test_uniforms_when_drawn_then_open_unit_interval(self) -> None:
        values = CounterStream(0).uniforms(0, 10_000)
        assert values.min() > 0.0
        assert values.max() < 1.0
        assert abs(values.mean() - 0.5) < 0.02

    def test_step_normals_when_population_split_then_consistent(self) -> None:
        stream = CounterStream(3, 1)
        whole = stream.step_normals(step=4, first=0, count=10, population=10)
        halves = np.concatenate(
            [stream.step_normals(4, 0, 5, population=10), stream.step_normals(4, 5, 5, population=10)]
        )
        assert np.array_equal(whole, halves)
        assert not np.array_equal(whole, stream.step_normals(5, 0, 10, population=10))

    def test_normals_when_many_then_standard_moments(self) -> None:
        values = CounterStream(9).normals(0, 20_000)
        assert abs(values.mean()) < 0.03
        assert values.std() == pytest.approx(1.0, abs=0.03)

    def test_streams_when_keys_differ_then_independent(self) -> None:
        assert not np.array_equal(CounterStream(1, 0).raw(0, 4), CounterStream(1, 1).raw(0, 4))
        assert not np.array_equal(CounterStream(1, 0).raw(0, 4), CounterStream(2, 0).raw(0, 4))

    def test_repr_when_formatted_then_shows_key(self) -> None:
        assert repr(CounterStream(4, 2)) == "CounterStream(seed=4, stream=2)"


@pytest.mark.parametrize(("seed", "stream"), [(-1, 0), (0, -3)])
def test_counter_stream_when_negative_key_then_raises(seed: int, stream: int) -> None:
    with pytest.raises(DomainError, match="non-negative"):
        CounterStream(seed, stream)
    with pytest.raises(DomainError, match="non-negative"):
        counter_generator(seed, stream)


def test_counter_generator_when_same_key_then_same_draws() -> None:
    first = counter_generator(8, 1).uniform(size=6)
    assert np.array_equal(first, counter_generator(8, 1).uniform(size=6))
