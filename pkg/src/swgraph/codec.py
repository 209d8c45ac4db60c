"""Entropy coding of SW graphs with a binary range coder.

Labelled mode walks every pair (u, v), u < v, in lexicographic order, skips
the cycle edges (they have probability one) and codes each remaining pair as a
Bernoulli(p(k)) symbol. Probabilities are quantized to 32 bits and derived
from the decimal strings carried in the header, so both sides build the same
integer table.

Structural mode replaces the graph by its canonical representative and codes
all pairs under one uniform edge density, because canonical labels carry no
circle-distance meaning.

The coder is the carry-propagating byte-oriented design used by LZMA: 64-bit
``low`` with a pending byte plus a run of 0xFF bytes, 32-bit ``range`` kept
in [2^24, 2^32).
"""
from __future__ import annotations

import math
import struct
import zlib
from dataclasses import dataclass
from decimal import ROUND_HALF_EVEN, Context, Decimal
from functools import lru_cache

import numba
import numpy as np

from .errors import CorruptPayload, HeaderMismatch, InvalidParams, NotAdmissible
from .model import LabelledGraph, ModelParams, contains_cycle, pair_counts
from .symmetry import SEARCH_NODE_BUDGET, canonical_form

MAGIC = b"SWG1"
FORMAT_VERSION = 1
PROB_BITS = 32
PROB_ONE = 1 << PROB_BITS
MODES = ("labelled", "structural")

_TOP = np.uint64(1 << 24)
_DECIMAL = Context(prec=50)

# decoder status codes
_OK, _OVERREAD, _TRAILING, _BAD_LEAD, _DESYNC = 0, 1, 2, 3, 4
_STATUS_TEXT = {
    _OVERREAD: "payload ended before the last symbol",
    _TRAILING: "bytes left over after the last symbol",
    _BAD_LEAD: "leading payload byte must be zero",
    _DESYNC: "decoder state out of range",
}


# ---------------------------------------------------------------------------
# probability tables
# ---------------------------------------------------------------------------


def quantize(p) -> int:
    """round(p * 2^32), clamped to [1, 2^32 - 1]."""
    q = int((Decimal(p) * PROB_ONE).to_integral_value(rounding=ROUND_HALF_EVEN))
    return min(max(q, 1), PROB_ONE - 1)


@lru_cache(maxsize=64)
def probability_table(n: int, a_str: str, b_str: str) -> np.ndarray:
    """q(k) for k = 0..n//2 computed in decimal arithmetic from the header strings.

    Entries 0 and 1 are unused (distance 1 is never coded).
    """
    ctx = _DECIMAL
    a, b = Decimal(a_str), Decimal(b_str)
    one = Decimal(1)
    c = ctx.multiply(ctx.multiply(b, one - a), ctx.power(ctx.divide(Decimal(2), Decimal(n)), one - a))
    q = np.zeros(n // 2 + 1, dtype=np.uint64)
    for k in range(2, n // 2 + 1):
        q[k] = quantize(ctx.multiply(c, ctx.power(Decimal(k), -a)))
    q.setflags(write=False)
    return q


def uniform_density(n: int, q: np.ndarray) -> int:
    """Quantized expected edge density over all C(n, 2) pairs, in integer arithmetic."""
    counts = pair_counts(n)
    total = n * PROB_ONE + sum(int(counts[k]) * int(q[k]) for k in range(2, n // 2 + 1))
    pairs = n * (n - 1) // 2
    rho = (2 * total + pairs) // (2 * pairs)
    return min(max(rho, 1), PROB_ONE - 1)


# ---------------------------------------------------------------------------
# range coder kernels
# ---------------------------------------------------------------------------


@numba.njit(cache=True, nogil=True)
def _encode_pairs(n, qtab, edge_codes, skip_ring, buf):
    """Code every pair u < v in lexicographic order; an edge is the symbol 1.

    ``qtab[d]`` is the quantized edge probability at circle distance d. Bytes
    go into ``buf``; the return is the byte count, or -1 if buf is too small.
    Growing the buffer inside the loop costs a factor of ~6 in speed, so the
    caller retries instead.
    """
    cap = len(buf)
    pos = 0
    low = np.uint64(0)
    rng = np.uint64(0xFFFFFFFF)
    cache = np.uint64(0)
    pending = 1
    ptr = 0
    m = len(edge_codes)
    nxt = edge_codes[0] if m else -1
    half = n // 2
    flushing = 0
    u = 0
    while u < n or flushing < 5:
        if u < n:
            base = u * n
            for v in range(u + 1, n):
                d = v - u
                if d > half:
                    d = n - d
                if skip_ring and d == 1:
                    continue
                bound = (rng * qtab[d]) >> np.uint64(32)
                if bound == 0:
                    bound = np.uint64(1)
                elif bound >= rng:
                    bound = rng - np.uint64(1)
                if base + v == nxt:
                    ptr += 1
                    nxt = edge_codes[ptr] if ptr < m else -1
                    rng = bound
                else:
                    low += bound
                    rng -= bound
                while rng < _TOP:
                    rng <<= np.uint64(8)
                    if low < np.uint64(0xFF000000) or low >= np.uint64(1 << 32):
                        if pos + pending > cap:
                            return -1
                        carry = low >> np.uint64(32)
                        buf[pos] = np.uint8((cache + carry) & np.uint64(0xFF))
                        pos += 1
                        for _ in range(pending - 1):
                            buf[pos] = np.uint8((np.uint64(0xFF) + carry) & np.uint64(0xFF))
                            pos += 1
                        pending = 0
                        cache = (low >> np.uint64(24)) & np.uint64(0xFF)
                    pending += 1
                    low = (low & np.uint64(0x00FFFFFF)) << np.uint64(8)
            u += 1
            continue
        # flush: five low shifts
        if low < np.uint64(0xFF000000) or low >= np.uint64(1 << 32):
            if pos + pending > cap:
                return -1
            carry = low >> np.uint64(32)
            buf[pos] = np.uint8((cache + carry) & np.uint64(0xFF))
            pos += 1
            for _ in range(pending - 1):
                buf[pos] = np.uint8((np.uint64(0xFF) + carry) & np.uint64(0xFF))
                pos += 1
            pending = 0
            cache = (low >> np.uint64(24)) & np.uint64(0xFF)
        pending += 1
        low = (low & np.uint64(0x00FFFFFF)) << np.uint64(8)
        flushing += 1
    return pos


@numba.njit(cache=True, nogil=True)
def _decode_pairs(data, n, qtab, skip_ring, out):
    """Inverse of _encode_pairs; edge codes go into ``out``.

    Returns (count, status). Decoding more edges than ``out`` holds is
    reported as a desync since the caller sizes it from the header.
    """
    cap = len(out)
    count = 0
    status = 0
    size = len(data)
    if size < 5:
        return 0, 1
    if data[0] != 0:
        return 0, 3
    code = np.uint64(0)
    for i in range(1, 5):
        code = (code << np.uint64(8)) | np.uint64(data[i])
    pos = 5
    rng = np.uint64(0xFFFFFFFF)
    if code >= rng:
        return 0, 4
    half = n // 2
    for u in range(n):
        base = u * n
        for v in range(u + 1, n):
            d = v - u
            if d > half:
                d = n - d
            if skip_ring and d == 1:
                continue
            bound = (rng * qtab[d]) >> np.uint64(32)
            if bound == 0:
                bound = np.uint64(1)
            elif bound >= rng:
                bound = rng - np.uint64(1)
            if code < bound:
                rng = bound
                if count >= cap:
                    return count, 4
                out[count] = base + v
                count += 1
            else:
                code -= bound
                rng -= bound
            while rng < _TOP:
                rng <<= np.uint64(8)
                byte = np.uint64(0)
                if pos < size:
                    byte = np.uint64(data[pos])
                else:
                    status = 1
                pos += 1
                code = (code << np.uint64(8)) | byte
            if code >= rng:
                return count, 4
    if status == 0 and pos != size:
        status = 2
    return count, status


def _size_hint(n: int, qtab: np.ndarray, codes: np.ndarray) -> int:
    """Expected payload bytes under qtab, padded; only a starting capacity."""
    q = np.clip(qtab.astype(float) / PROB_ONE, 1e-12, 1 - 1e-12)
    pairs = pair_counts(n).astype(float)
    ones = len(codes) * -np.log2(q[2:].min()) if len(codes) else 0.0
    zeros = float((pairs[1:] * -np.log2(1.0 - q[1:])).sum())
    return int(1.05 * (ones + zeros) / 8) + 1024


def _encode(n: int, qtab: np.ndarray, codes: np.ndarray, skip_ring: bool) -> np.ndarray:
    codes = np.ascontiguousarray(codes, dtype=np.int64)
    qtab = np.ascontiguousarray(qtab, dtype=np.uint64)
    cap = _size_hint(n, qtab, codes)
    while True:
        buf = np.empty(cap, dtype=np.uint8)
        used = _encode_pairs(n, qtab, codes, skip_ring, buf)
        if used >= 0:
            return buf[:used]
        cap *= 2


# ---------------------------------------------------------------------------
# containers
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BitStream:
    """Bit sequence stored MSB-first in bytes; trailing pad bits are zero."""

    data: bytes
    length_bits: int

    def __post_init__(self):
        if not 0 <= self.length_bits <= 8 * len(self.data) or len(self.data) != -(-self.length_bits // 8):
            raise ValueError("length_bits inconsistent with the byte count")

    @classmethod
    def from_bytes(cls, data: bytes) -> "BitStream":
        return cls(bytes(data), 8 * len(data))

    @classmethod
    def from_bits(cls, bits) -> "BitStream":
        arr = np.asarray(list(bits), dtype=np.uint8)
        if arr.size and arr.max() > 1:
            raise ValueError("bits must be 0 or 1")
        return cls(np.packbits(arr).tobytes(), len(arr))

    @property
    def bits(self) -> np.ndarray:
        return np.unpackbits(np.frombuffer(self.data, dtype=np.uint8))[: self.length_bits]

    def __len__(self) -> int:
        return self.length_bits

    def to_bytes(self) -> bytes:
        return self.data


def _crc(codes: np.ndarray) -> int:
    return zlib.crc32(np.ascontiguousarray(codes, dtype="<i8").tobytes())


@dataclass(frozen=True)
class CompressedGraph:
    mode: str
    n: int
    a: str
    b: str
    payload: BitStream
    num_edges: int
    crc32: int
    version: int = FORMAT_VERSION

    @property
    def payload_bits(self) -> int:
        return self.payload.length_bits

    def params(self) -> ModelParams:
        return ModelParams(self.n, float(self.a), float(self.b))

    def header_text(self) -> str:
        fields = [
            ("version", self.version), ("mode", self.mode), ("n", self.n),
            ("a", self.a), ("b", self.b), ("edges", self.num_edges),
            ("bits", self.payload.length_bits), ("crc32", self.crc32),
        ]
        return "".join(f"{k}={v}\n" for k, v in fields)

    def to_bytes(self) -> bytes:
        header = self.header_text().encode("utf-8")
        return MAGIC + struct.pack("<I", len(header)) + header + self.payload.to_bytes()

    @classmethod
    def from_bytes(cls, blob: bytes) -> "CompressedGraph":
        if len(blob) < 8 or blob[:4] != MAGIC:
            raise HeaderMismatch("not an SWG1 container")
        (hlen,) = struct.unpack("<I", blob[4:8])
        if 8 + hlen > len(blob):
            raise HeaderMismatch("header runs past the end of the container")
        try:
            text = blob[8:8 + hlen].decode("utf-8")
            fields = dict(line.split("=", 1) for line in text.splitlines() if line)
            version = int(fields["version"])
            mode = fields["mode"]
            n = int(fields["n"])
            a, b = fields["a"], fields["b"]
            edges, bits, crc = int(fields["edges"]), int(fields["bits"]), int(fields["crc32"])
        except (UnicodeDecodeError, KeyError, ValueError) as exc:
            raise HeaderMismatch(f"malformed header: {exc}") from None
        if version != FORMAT_VERSION:
            raise HeaderMismatch(f"unsupported format version {version}")
        if mode not in MODES:
            raise HeaderMismatch(f"unknown mode {mode!r}")
        payload = blob[8 + hlen:]
        if bits != 8 * len(payload):
            raise CorruptPayload(f"header declares {bits} payload bits, found {8 * len(payload)}")
        return cls(mode, n, a, b, BitStream.from_bytes(payload), edges, crc, version)


def save(c: CompressedGraph, path) -> None:
    with open(path, "wb") as fh:
        fh.write(c.to_bytes())


def load(path) -> CompressedGraph:
    with open(path, "rb") as fh:
        return CompressedGraph.from_bytes(fh.read())


# ---------------------------------------------------------------------------
# encode / decode
# ---------------------------------------------------------------------------


def _table(params: ModelParams) -> np.ndarray:
    return probability_table(params.n, params.a_str, params.b_str)


def _uniform_table(params: ModelParams) -> np.ndarray:
    rho = uniform_density(params.n, _table(params))
    return np.full(params.n // 2 + 1, rho, dtype=np.uint64)


def _check_input(params: ModelParams, g: LabelledGraph) -> None:
    if g.n != params.n:
        raise InvalidParams(f"graph has {g.n} vertices, parameters say {params.n}")
    if not contains_cycle(g):
        raise NotAdmissible("graph does not contain the base cycle")


def _pack(mode: str, params: ModelParams, codes: np.ndarray, payload: np.ndarray) -> CompressedGraph:
    return CompressedGraph(mode, params.n, params.a_str, params.b_str,
                           BitStream.from_bytes(payload.tobytes()), len(codes), _crc(codes))


def encode_labelled(params: ModelParams, g: LabelledGraph) -> CompressedGraph:
    _check_input(params, g)
    codes = g.edge_codes()
    d = np.abs(g.edges[:, 1] - g.edges[:, 0])
    optional = codes[np.minimum(d, g.n - d) > 1]
    payload = _encode(params.n, _table(params), optional, True)
    return _pack("labelled", params, codes, payload)


def encode_structural(params: ModelParams, g: LabelledGraph,
                      node_budget: int = SEARCH_NODE_BUDGET) -> CompressedGraph:
    _check_input(params, g)
    canon = canonical_form(g, node_budget).graph
    codes = canon.edge_codes()
    payload = _encode(params.n, _uniform_table(params), codes, False)
    return _pack("structural", params, codes, payload)


def _header_params(c: CompressedGraph, expected: ModelParams | None) -> ModelParams:
    try:
        params = c.params()
    except (InvalidParams, ValueError) as exc:
        raise HeaderMismatch(f"header parameters invalid: {exc}") from None
    if expected is not None and (expected.n, expected.a_str, expected.b_str) != (c.n, c.a, c.b):
        raise HeaderMismatch("container parameters differ from the expected model")
    return params


def _finish(c: CompressedGraph, codes: np.ndarray, status: int) -> LabelledGraph:
    if status != _OK:
        raise CorruptPayload(_STATUS_TEXT[status])
    if len(codes) != c.num_edges or _crc(codes) != c.crc32:
        raise CorruptPayload("decoded edges fail the header checksum")
    n = c.n
    return LabelledGraph._trusted(n, np.stack([codes // n, codes % n], axis=1) + 1)


def decode_labelled(c: CompressedGraph, expected: ModelParams | None = None) -> LabelledGraph:
    if c.mode != "labelled":
        raise HeaderMismatch(f"container holds a {c.mode} encoding")
    params = _header_params(c, expected)
    data = np.frombuffer(c.payload.to_bytes(), dtype=np.uint8)
    out = np.empty(max(c.num_edges, 0) + 1, dtype=np.int64)
    count, status = _decode_pairs(data, params.n, _table(params), True, out)
    optional = out[:count]
    ring = np.arange(params.n, dtype=np.int64)
    ends = (ring + 1) % params.n
    cyc = np.minimum(ring, ends) * params.n + np.maximum(ring, ends)
    codes = np.sort(np.concatenate([optional, cyc]))
    return _finish(c, codes, status)


def decode_structural(c: CompressedGraph, expected: ModelParams | None = None) -> LabelledGraph:
    """A graph isomorphic to the encoded one (its canonical representative)."""
    if c.mode != "structural":
        raise HeaderMismatch(f"container holds a {c.mode} encoding")
    params = _header_params(c, expected)
    data = np.frombuffer(c.payload.to_bytes(), dtype=np.uint8)
    out = np.empty(max(c.num_edges, 0) + 1, dtype=np.int64)
    count, status = _decode_pairs(data, params.n, _uniform_table(params), False, out)
    codes = out[:count].copy()
    return _finish(c, codes, status)


def decode(c: CompressedGraph, expected: ModelParams | None = None) -> LabelledGraph:
    if c.mode == "labelled":
        return decode_labelled(c, expected)
    return decode_structural(c, expected)


def ideal_code_length_bits(params: ModelParams, g: LabelledGraph) -> float:
    """-log2 of the quantized model probability of g (labelled mode)."""
    q = _table(params).astype(float) / PROB_ONE
    d = np.abs(g.edges[:, 1] - g.edges[:, 0])
    d = np.minimum(d, g.n - d)
    present = np.bincount(d, minlength=len(q)).astype(float)[2:]
    absent = pair_counts(g.n)[2:] - present
    qk = q[2:]
    return float(-(present * np.log2(qk) + absent * np.log2(1.0 - qk)).sum())


def payload_entropy_ratio(c: CompressedGraph, h_graph_nats: float) -> float:
    """payload bits * log 2 / H(G)."""
    return c.payload_bits * math.log(2.0) / h_graph_nats
