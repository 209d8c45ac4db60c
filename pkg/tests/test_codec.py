import math
from decimal import Decimal

import numpy as np
import pytest
from hypothesis import given, strategies as st

from swgraph.codec import (MAGIC, PROB_ONE, BitStream, CompressedGraph, decode, decode_labelled,
                           decode_structural, encode_labelled, encode_structural,
                           ideal_code_length_bits, probability_table, quantize, uniform_density)
from swgraph.entropy import sw_entropy_exact
from swgraph.errors import CorruptPayload, HeaderMismatch, NotAdmissible
from swgraph.model import LabelledGraph, ModelParams, sample_sw, trial_seed
from swgraph.symmetry import Permutation, canonical_form


def _random_params(rng):
    n = int(rng.integers(5, 160))
    a = float(rng.uniform(0.05, 0.95))
    bmax = 0.95 / ((1 - a) * (2 / n) ** (1 - a) * 2 ** (-a))
    return ModelParams(n, a, float(rng.uniform(0.01, min(bmax, 30.0))))


def test_quantize_rules():
    assert quantize("0.5") == PROB_ONE // 2
    assert quantize(0) == 1
    assert quantize(1) == PROB_ONE - 1
    assert quantize("1e-20") == 1


def test_table_matches_float_model():
    params = ModelParams(1001, 0.37, 4.2)
    q = probability_table(params.n, params.a_str, params.b_str)
    p = params.probabilities()
    # decimal-derived q agrees with the double evaluation to within one unit
    assert np.all(np.abs(q[2:].astype(float) - np.round(p[2:] * PROB_ONE)) <= 1)
    again = probability_table(1001, "0.37", "4.2")
    assert np.array_equal(q, again)


def test_bitstream():
    bs = BitStream.from_bits([1, 0, 1, 1, 0, 0, 0, 0, 1])
    assert bs.length_bits == 9 and len(bs.data) == 2
    assert list(bs.bits) == [1, 0, 1, 1, 0, 0, 0, 0, 1]
    assert BitStream.from_bytes(b"\x01\x02").length_bits == 16
    with pytest.raises(ValueError):
        BitStream(b"\x00", 9)


def test_lossless_random_params():
    rng = np.random.default_rng(2024)
    for t in range(1000):
        params = _random_params(rng)
        g = sample_sw(params, t)
        c = encode_labelled(params, g)
        back = CompressedGraph.from_bytes(c.to_bytes())
        assert decode_labelled(back) == g


@given(st.integers(0, 2**63))
def test_structural_roundtrip_property(seed):
    params = ModelParams(40, 0.5, 2)
    g = sample_sw(params, seed)
    c = encode_structural(params, g)
    h = decode_structural(CompressedGraph.from_bytes(c.to_bytes()))
    assert canonical_form(h) == canonical_form(g)


def test_structural_isomorphic_inputs_identical_payloads():
    params = ModelParams(60, 0.5, 3)
    g = sample_sw(params, 9)
    # relabel by a rotation + reflection, which keeps the base cycle
    images = [(60 - u) % 60 + 1 for u in range(1, 61)]
    h = g.relabel(images)
    assert h != g
    assert encode_structural(params, g).to_bytes() == encode_structural(params, h).to_bytes()


def test_bare_cycle_length():
    params = ModelParams(2001, 0.5, 5)
    g = LabelledGraph.cycle(2001)
    c = encode_labelled(params, g)
    ideal = ideal_code_length_bits(params, g)
    q = probability_table(2001, params.a_str, params.b_str)[2:].astype(float) / PROB_ONE
    assert ideal == pytest.approx(-2001 * np.log2(1 - q).sum())
    assert abs(c.payload_bits - ideal) <= 64


def test_payload_close_to_ideal():
    params = ModelParams(3001, 0.5, 10)
    for s in range(5):
        g = sample_sw(params, s)
        c = encode_labelled(params, g)
        assert 0 <= c.payload_bits - ideal_code_length_bits(params, g) <= 64


def test_efficiency_small_scale():
    params = ModelParams(3001, 0.5, 10)
    bits = [encode_labelled(params, sample_sw(params, trial_seed(5, t))).payload_bits for t in range(30)]
    h = sw_entropy_exact(params)
    assert 0.98 * h <= np.mean(bits) * math.log(2) <= 1.01 * h + 128 * math.log(2)


def test_structural_not_much_larger():
    params = ModelParams(500, 0.5, 5)
    for s in range(10):
        g = sample_sw(params, s)
        lab = encode_labelled(params, g).payload_bits
        struct = encode_structural(params, g).payload_bits
        assert struct <= lab + 2 * 500 * math.log2(500)


def test_container_format():
    params = ModelParams(50, 0.5, 2)
    c = encode_labelled(params, sample_sw(params, 1))
    blob = c.to_bytes()
    assert blob[:4] == MAGIC
    hlen = int.from_bytes(blob[4:8], "little")
    header = blob[8:8 + hlen].decode()
    assert "version=1\n" in header and "mode=labelled\n" in header
    assert "n=50\n" in header and "a=0.5\n" in header and "b=2.0\n" in header
    assert CompressedGraph.from_bytes(blob) == c


def test_header_decimal_strings_reconstruct_table():
    params = ModelParams(101, 0.5, 5)
    c = encode_labelled(params, sample_sw(params, 3))
    back = CompressedGraph.from_bytes(c.to_bytes())
    assert back.a == "0.5" and back.params() == params
    assert np.array_equal(probability_table(back.n, back.a, back.b),
                          probability_table(params.n, params.a_str, params.b_str))
    assert Decimal(back.a) == Decimal(params.a)


def test_corruption_is_detected():
    params = ModelParams(301, 0.5, 5)
    g = sample_sw(params, 8)
    c = encode_labelled(params, g)
    data = c.payload.to_bytes()
    short = CompressedGraph(c.mode, c.n, c.a, c.b, BitStream.from_bytes(data[:-4]), c.num_edges, c.crc32)
    with pytest.raises(CorruptPayload):
        decode_labelled(short)
    longer = CompressedGraph(c.mode, c.n, c.a, c.b, BitStream.from_bytes(data + b"\x00"), c.num_edges, c.crc32)
    with pytest.raises(CorruptPayload):
        decode_labelled(longer)
    with pytest.raises(CorruptPayload):
        CompressedGraph.from_bytes(c.to_bytes()[:-3])
    rng = np.random.default_rng(1)
    for _ in range(50):
        buf = bytearray(data)
        buf[int(rng.integers(len(buf)))] ^= 1 << int(rng.integers(8))
        bad = CompressedGraph(c.mode, c.n, c.a, c.b, BitStream.from_bytes(bytes(buf)), c.num_edges, c.crc32)
        try:
            out = decode_labelled(bad)
        except CorruptPayload:
            continue
        assert out == g


def test_header_mismatch():
    params = ModelParams(50, 0.5, 2)
    c = encode_labelled(params, sample_sw(params, 1))
    with pytest.raises(HeaderMismatch):
        decode_structural(c)
    with pytest.raises(HeaderMismatch):
        decode_labelled(c, expected=ModelParams(50, 0.5, 3))
    with pytest.raises(HeaderMismatch):
        CompressedGraph.from_bytes(b"XXXX" + c.to_bytes()[4:])
    blob = c.to_bytes().replace(b"version=1", b"version=7")
    with pytest.raises(HeaderMismatch):
        CompressedGraph.from_bytes(blob)
    assert decode(c) == decode_labelled(c, expected=params)


def test_inadmissible_input():
    params = ModelParams(20, 0.5, 1)
    with pytest.raises(NotAdmissible):
        encode_labelled(params, LabelledGraph(20, [(1, 2)]))


def test_uniform_density_integer_rule():
    params = ModelParams(101, 0.5, 5)
    q = probability_table(101, params.a_str, params.b_str)
    rho = uniform_density(101, q)
    expected_edges = 101 + sum(int(params.pair_counts()[k]) * q[k] / PROB_ONE for k in range(2, 51))
    assert rho / PROB_ONE == pytest.approx(expected_edges / (101 * 50), rel=1e-9)


def test_determinism_bytes():
    params = ModelParams(500, 0.4, 6)
    a = encode_labelled(params, sample_sw(params, 77)).to_bytes()
    b = encode_labelled(params, sample_sw(params, 77)).to_bytes()
    assert a == b
