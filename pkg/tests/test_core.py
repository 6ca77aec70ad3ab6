"""Domain types, validation, and the two serialization formats."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import wmhash as wm
from wmhash.core import _is_prime


class TestMakeWeightedSet:
    def test_sorted_and_typed(self):
        s = wm.make_weighted_set(10, {7: 1.0, 2: 0.5, 5: 2.0})
        np.testing.assert_array_equal(s.indices, [2, 5, 7])
        assert s.indices.dtype == np.uint32
        assert s.weights.dtype == np.float64
        np.testing.assert_array_equal(s.weights, [0.5, 2.0, 1.0])

    def test_zero_weights_dropped(self):
        s = wm.make_weighted_set(5, {0: 0.0, 3: 1.5})
        np.testing.assert_array_equal(s.indices, [3])

    def test_empty_is_representable(self):
        s = wm.make_weighted_set(5, {})
        assert s.is_empty
        assert len(s) == 0

    def test_accepts_pair_iterable(self):
        s = wm.make_weighted_set(5, [(1, 1.0), (0, 2.0)])
        np.testing.assert_array_equal(s.indices, [0, 1])

    def test_out_of_range_rejected(self):
        with pytest.raises(wm.IndexOutOfRange):
            wm.make_weighted_set(5, {5: 1.0})
        with pytest.raises(wm.IndexOutOfRange):
            wm.make_weighted_set(5, [(-1, 1.0)])

    def test_duplicate_rejected(self):
        with pytest.raises(wm.DuplicateIndex):
            wm.make_weighted_set(5, [(1, 1.0), (1, 2.0)])

    def test_negative_rejected(self):
        with pytest.raises(wm.NegativeWeight):
            wm.make_weighted_set(5, {1: -0.5})

    def test_nonfinite_rejected(self):
        with pytest.raises(wm.NonFiniteWeight):
            wm.make_weighted_set(5, {1: float("nan")})
        with pytest.raises(wm.NonFiniteWeight):
            wm.make_weighted_set(5, {1: float("inf")})

    def test_arrays_immutable(self):
        s = wm.make_weighted_set(5, {1: 1.0})
        with pytest.raises(ValueError):
            s.indices[0] = 2
        with pytest.raises(ValueError):
            s.weights[0] = 2.0

    def test_helpers(self):
        s = wm.make_weighted_set(5, {1: 1.0, 3: 0.5})
        assert s.to_dict() == {1: 1.0, 3: 0.5}
        assert s.total_weight() == pytest.approx(1.5)

    def test_binarize(self):
        s = wm.make_weighted_set(5, {1: 0.25, 3: 7.0})
        b = wm.binarize(s)
        np.testing.assert_array_equal(b.indices, s.indices)
        np.testing.assert_array_equal(b.weights, [1.0, 1.0])


class TestSketchConfig:
    def test_defaults(self):
        cfg = wm.SketchConfig(num_hashes=10, seed=0)
        assert cfg.quant_scale == 1000
        assert cfg.perm_prime == 2_147_483_647

    @pytest.mark.parametrize("kw", [
        dict(num_hashes=0, seed=0),
        dict(num_hashes=4, seed=0, quant_scale=0),
        dict(num_hashes=4, seed=0, perm_prime=2_147_483_646),
    ])
    def test_rejects_bad_params(self, kw):
        with pytest.raises(wm.InvalidParams):
            wm.SketchConfig(**kw)

    def test_is_prime_spot_checks(self):
        assert _is_prime(2) and _is_prime(3) and _is_prime(2_147_483_647)
        assert _is_prime((1 << 61) - 1)
        assert not _is_prime(1) and not _is_prime(561) and not _is_prime(2**32)


class TestAlgorithmTable:
    def test_thirteen_names_distinct_tags(self):
        assert len(wm.ALGORITHM_NAMES) == 13
        tags = [wm.algorithm_tag(n) for n in wm.ALGORITHM_NAMES]
        assert tags == list(range(1, 14))

    def test_unknown_name_lists_valid(self):
        with pytest.raises(wm.UnknownAlgorithm) as ei:
            wm.algorithm_tag("superhash")
        for name in wm.ALGORITHM_NAMES:
            assert name in str(ei.value)

    def test_variant_assignments(self):
        assert wm.algorithm_variant("minhash") is wm.CodeVariant.MIN_VALUE
        assert wm.algorithm_variant("haveliwala") is wm.CodeVariant.INDEX_SUB
        assert wm.algorithm_variant("icws") is wm.CodeVariant.INDEX_Y
        assert wm.algorithm_variant("0bit") is wm.CodeVariant.INDEX_ONLY
        assert wm.algorithm_variant("shrivastava") is wm.CodeVariant.STEP_COUNT


def _fp(algo, d=4, seed=9, ks=None, vals=None):
    return wm.Fingerprint(algo, d, seed, ks, vals)


class TestFingerprint:
    def test_requires_matching_lengths(self):
        with pytest.raises(wm.InvalidParams):
            _fp("icws", ks=np.zeros(3, dtype=np.uint32), vals=np.zeros(4))
        with pytest.raises(wm.InvalidParams):
            _fp("minhash", ks=np.zeros(4, dtype=np.uint32), vals=np.zeros(4, dtype=np.uint64))

    def test_equality_is_bitwise_on_floats(self):
        ks = np.zeros(2, dtype=np.uint32)
        a = _fp("icws", d=2, ks=ks.copy(), vals=np.array([0.0, 1.0]))
        b = _fp("icws", d=2, ks=ks.copy(), vals=np.array([-0.0, 1.0]))
        c = _fp("icws", d=2, ks=ks.copy(), vals=np.array([0.0, 1.0]))
        assert a != b  # -0.0 and 0.0 differ as bit patterns
        assert a == c

    def test_equality_checks_provenance(self):
        ks = np.zeros(2, dtype=np.uint32)
        vals = np.ones(2)
        assert _fp("icws", d=2, seed=1, ks=ks, vals=vals) != _fp(
            "icws", d=2, seed=2, ks=ks.copy(), vals=vals.copy()
        )

    def test_sentinel_mask(self):
        ks = np.array([0, wm.SENTINEL_ELEMENT, 1], dtype=np.uint32)
        fp = _fp("0bit", d=3, ks=ks, vals=None)
        np.testing.assert_array_equal(fp.is_sentinel(), [False, True, False])

    def test_code_accessors(self):
        fp = _fp("haveliwala", d=2,
                 ks=np.array([3, 1], dtype=np.uint32),
                 vals=np.array([7, 2], dtype=np.uint64))
        assert fp.code(0) == wm.IndexSub(3, 7)
        assert fp.codes == [wm.IndexSub(3, 7), wm.IndexSub(1, 2)]


class TestWireFormat:
    def _roundtrip(self, fp):
        blob = wm.fingerprint_to_bytes(fp)
        back = wm.fingerprint_from_bytes(blob)
        assert back == fp
        return blob

    def test_roundtrip_every_variant(self, small_set):
        cfg = wm.SketchConfig(num_hashes=32, seed=3)
        layout = wm.build_layout([small_set])
        for algo in wm.ALGORITHM_NAMES:
            fp = wm.sketch(algo, small_set, cfg, layout=layout)
            self._roundtrip(fp)

    def test_header_layout(self):
        fp = _fp("minhash", d=1, seed=2, ks=None, vals=np.array([5], dtype=np.uint64))
        blob = wm.fingerprint_to_bytes(fp)
        # tag u8 | D u32 | seed u64 | one u64 record
        assert len(blob) == 1 + 4 + 8 + 8
        assert blob[0] == wm.algorithm_tag("minhash")

    def test_truncation_rejected(self):
        fp = _fp("0bit", d=3, ks=np.zeros(3, dtype=np.uint32), vals=None)
        blob = wm.fingerprint_to_bytes(fp)
        with pytest.raises(wm.MalformedStream):
            wm.fingerprint_from_bytes(blob[:-1])
        with pytest.raises(wm.MalformedStream):
            wm.fingerprint_from_bytes(blob + b"x")

    def test_bad_tag_rejected(self):
        fp = _fp("0bit", d=1, ks=np.zeros(1, dtype=np.uint32), vals=None)
        blob = bytearray(wm.fingerprint_to_bytes(fp))
        blob[0] = 99
        with pytest.raises(wm.MalformedStream):
            wm.fingerprint_from_bytes(bytes(blob))

    def test_expected_algo_enforced(self):
        fp = _fp("0bit", d=1, ks=np.zeros(1, dtype=np.uint32), vals=None)
        blob = wm.fingerprint_to_bytes(fp)
        with pytest.raises(wm.AlgorithmMismatch):
            wm.fingerprint_from_bytes(blob, expected_algo="icws")

    def test_file_roundtrip(self, tmp_path, small_set):
        cfg = wm.SketchConfig(num_hashes=16, seed=1)
        fps = [wm.sketch("icws", small_set, cfg), wm.sketch("icws", small_set, cfg)]
        path = tmp_path / "fps.bin"
        wm.write_fingerprint_file(path, fps)
        back = wm.read_fingerprint_file(path)
        assert back == fps

    def test_file_magic_checked(self, tmp_path):
        path = tmp_path / "junk.bin"
        path.write_bytes(b"NOPE" + bytes(16))
        with pytest.raises(wm.MalformedStream):
            wm.read_fingerprint_file(path)


class TestDatasetFormat:
    def test_roundtrip_exact_weights(self, tmp_path):
        sets = [
            wm.make_weighted_set(20, {0: 0.1, 7: 1.0 / 3.0}),
            wm.make_weighted_set(20, {3: 2.5}),
            wm.make_weighted_set(20, {}),
        ]
        path = tmp_path / "data.txt"
        wm.write_dataset(path, sets, bounds={0: 1.0, 7: 0.5})
        back, bounds = wm.read_dataset(path)
        assert len(back) == 3
        for orig, got in zip(sets, back):
            np.testing.assert_array_equal(orig.indices, got.indices)
            np.testing.assert_array_equal(orig.weights, got.weights)  # repr roundtrip
        assert bounds == {0: 1.0, 7: 0.5}

    def test_bounds_optional(self, tmp_path):
        path = tmp_path / "data.txt"
        wm.write_dataset(path, [wm.make_weighted_set(4, {1: 1.0})])
        _, bounds = wm.read_dataset(path)
        assert bounds is None

    def test_missing_header_rejected(self, tmp_path):
        path = tmp_path / "data.txt"
        path.write_text("0:1.0\n")
        with pytest.raises(wm.MalformedStream):
            wm.read_dataset(path)

    def test_bad_token_rejected(self, tmp_path):
        path = tmp_path / "data.txt"
        path.write_text("#universe 4\n0:1.0 nonsense\n")
        with pytest.raises(wm.MalformedStream):
            wm.read_dataset(path)

    def test_universe_mismatch_on_write(self, tmp_path):
        sets = [wm.make_weighted_set(4, {0: 1.0}), wm.make_weighted_set(5, {0: 1.0})]
        with pytest.raises(wm.UniverseMismatch):
            wm.write_dataset(tmp_path / "x.txt", sets)


@settings(max_examples=80, deadline=None)
@given(
    st.sampled_from(wm.ALGORITHM_NAMES),
    st.integers(min_value=1, max_value=64),
    st.integers(min_value=0, max_value=2**63 - 1),
)
def test_wire_roundtrip_property(algo, d, seed):
    """Serialization is lossless for arbitrary well-formed fingerprints."""
    variant = wm.algorithm_variant(algo)
    rng = np.random.default_rng(d * 1000003 + seed % 997)
    ks = vals = None
    if variant in (wm.CodeVariant.INDEX_SUB, wm.CodeVariant.INDEX_Y, wm.CodeVariant.INDEX_ONLY):
        ks = rng.integers(0, 2**32, size=d, dtype=np.uint64).astype(np.uint32)
    if variant in (wm.CodeVariant.MIN_VALUE, wm.CodeVariant.INDEX_SUB, wm.CodeVariant.STEP_COUNT):
        vals = rng.integers(0, 2**63, size=d, dtype=np.uint64)
    elif variant is wm.CodeVariant.INDEX_Y:
        vals = rng.random(d)
    fp = wm.Fingerprint(algo, d, seed, ks, vals)
    assert wm.fingerprint_from_bytes(wm.fingerprint_to_bytes(fp)) == fp
