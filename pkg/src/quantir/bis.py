"""Binary instruction stream codec.

Stream layout (all multi-byte scalars little-endian)::

    magic "OBIS" | version u8 | flags u8 | reserved u8 x2 | circuit_count varint
    per circuit: num_qubits varint | num_cbits varint | instruction_count varint
                 | records...

Flags: bit 0 selects compressed operand encoding; all other flag bits and the
reserved octets must be zero.  Varints are unsigned LEB128, at most 5 octets,
value below 2**32; non-minimal (padded) encodings are accepted.

A record is an opcode byte followed by its operands.  Qubit/cbit indices are
u32 in uncompressed mode and varints in compressed mode; angles are always
raw 8-byte doubles.  BARRIER stores a qubit-count varint (both modes) before
its indices.  Record sizes, uncompressed: plain 1q 5, rotation 13, U3 29,
two-qubit 9, measure 9; compressed with 1-byte varints: 2, 10, 26, 3, 3.

Encode and decode run on the packed column form of flat circuits: offsets are
computed for all records up front and fields move as bulk array copies.
Decoding first walks record offsets assuming the fixed-size fast shape and
verifies the assumption afterwards (any multi-byte varint exposes a
continuation bit at a checked position); streams that don't fit -- barriers,
indices >= 128, padded varints -- take a careful per-record path.  Every
malformed input raises a :class:`BisDecodeError` subclass carrying the byte
``offset``.
"""
from __future__ import annotations

import math
import struct

import numpy as np

from .circuit import Circuit, _Columns, flatten
from .gates import KIND_BY_OPCODE

__all__ = [
    "encode", "decode", "StreamEncoder", "StreamDecoder",
    "BisEncodeError", "BisDecodeError", "BadMagic", "UnsupportedVersion",
    "ReservedBits", "Truncated", "UnknownOpcode", "VarintTooLong",
    "BadOperand", "TrailingBytes",
]

MAGIC = b"OBIS"
VERSION = 1
FLAG_COMPRESSED = 0x01
_HEADER_LEN = 8  # magic + version + flags + 2 reserved octets
_U32_MAX = (1 << 32) - 1


class BisEncodeError(ValueError):
    """Circuit cannot be represented in the stream format."""


class BisDecodeError(ValueError):
    """Malformed stream; ``offset`` is the byte position of the fault."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at byte {offset})")
        self.offset = offset


class BadMagic(BisDecodeError):
    pass


class UnsupportedVersion(BisDecodeError):
    pass


class ReservedBits(BisDecodeError):
    pass


class Truncated(BisDecodeError):
    pass


class UnknownOpcode(BisDecodeError):
    pass


class VarintTooLong(BisDecodeError):
    pass


class BadOperand(BisDecodeError):
    pass


class TrailingBytes(BisDecodeError):
    pass


# -- varints ------------------------------------------------------------------

def _write_varint(out: bytearray, v: int) -> None:
    while True:
        b = v & 0x7F
        v >>= 7
        if v:
            out.append(b | 0x80)
        else:
            out.append(b)
            return


def _write_varint_padded5(out: bytearray, v: int) -> None:
    out.append((v & 0x7F) | 0x80)
    out.append(((v >> 7) & 0x7F) | 0x80)
    out.append(((v >> 14) & 0x7F) | 0x80)
    out.append(((v >> 21) & 0x7F) | 0x80)
    out.append((v >> 28) & 0x7F)


def _read_varint(data, o: int, end: int) -> tuple[int, int]:
    start = o
    val = 0
    shift = 0
    for _ in range(5):
        if o >= end:
            raise Truncated("varint runs past end of data", o)
        byte = data[o]
        o += 1
        val |= (byte & 0x7F) << shift
        if not byte & 0x80:
            if val > _U32_MAX:
                raise VarintTooLong("varint value exceeds 32 bits", start)
            return val, o
        shift += 7
    raise VarintTooLong("varint longer than 5 octets", start)


# -- per-class record geometry ------------------------------------------------

# record length by opcode, 0 = no fixed size (barrier) or invalid opcode
_U_STEP = [0] * 256
_C_STEP = [0] * 256
for _op in KIND_BY_OPCODE:
    _cls = _op >> 5
    if _cls < 5:
        _U_STEP[_op] = (5, 13, 29, 9, 9)[_cls]
        _C_STEP[_op] = (2, 10, 26, 3, 3)[_cls]

_ULEN_BY_CLASS = np.array([5, 13, 29, 9, 9, 0, 0, 0], dtype=np.int64)
_CLEN_BY_CLASS = np.array([2, 10, 26, 3, 3, 0, 0, 0], dtype=np.int64)
_PCOUNT_BY_CLASS = np.array([0, 1, 3, 0, 0, 0, 0, 0], dtype=np.int64)

_R1_4 = np.arange(1, 5)
_R5_9 = np.arange(5, 9)
_R5_13 = np.arange(5, 13)
_R5_29 = np.arange(5, 29)
_R2_10 = np.arange(2, 10)
_R2_26 = np.arange(2, 26)

_PACK_U32 = struct.Struct("<I").pack
_PACK_D = struct.Struct("<d").pack
_UNPACK_U32 = struct.Struct("<I").unpack_from
_UNPACK_D = struct.Struct("<d").unpack_from
_UNPACK_3D = struct.Struct("<ddd").unpack_from


# -- encoding -----------------------------------------------------------------

def _encode_records_uncompressed(out: bytearray, cols: _Columns) -> None:
    n = len(cols)
    if n == 0:
        return
    code = cols.code
    cls = code >> 5
    if (cls == 5).any():
        _encode_records_loop(out, cols, compress=False)
        return
    lens = _ULEN_BY_CLASS[cls]
    ends = np.cumsum(lens)
    offs = ends - lens
    buf = np.zeros(int(ends[-1]), dtype=np.uint8)
    buf[offs] = code
    buf[offs[:, None] + _R1_4] = cols.a.astype("<u4").view(np.uint8).reshape(n, 4)
    m34 = cls >= 3
    if m34.any():
        buf[offs[m34][:, None] + _R5_9] = (
            cols.b[m34].astype("<u4").view(np.uint8).reshape(-1, 4))
    pc = _PCOUNT_BY_CLASS[cls]
    if cols.params.size:
        p8 = cols.params.astype("<f8", copy=False).view(np.uint8).reshape(-1, 8)
        pstart = np.cumsum(pc) - pc
        rot = cls == 1
        if rot.any():
            buf[offs[rot][:, None] + _R5_13] = p8[pstart[rot]]
        u3 = cls == 2
        if u3.any():
            rows = p8[pstart[u3][:, None] + np.arange(3)].reshape(-1, 24)
            buf[offs[u3][:, None] + _R5_29] = rows
    out += buf.tobytes()


def _encode_records_compressed(out: bytearray, cols: _Columns) -> None:
    n = len(cols)
    if n == 0:
        return
    code = cols.code
    cls = code >> 5
    m34 = cls >= 3
    small = (not (cls == 5).any()) and bool((cols.a < 128).all()) \
        and (not m34.any() or bool((cols.b[m34] < 128).all()))
    if not small:
        _encode_records_loop(out, cols, compress=True)
        return
    lens = _CLEN_BY_CLASS[cls]
    ends = np.cumsum(lens)
    offs = ends - lens
    buf = np.zeros(int(ends[-1]), dtype=np.uint8)
    buf[offs] = code
    buf[offs + 1] = cols.a
    if m34.any():
        buf[offs[m34] + 2] = cols.b[m34]
    pc = _PCOUNT_BY_CLASS[cls]
    if cols.params.size:
        p8 = cols.params.astype("<f8", copy=False).view(np.uint8).reshape(-1, 8)
        pstart = np.cumsum(pc) - pc
        rot = cls == 1
        if rot.any():
            buf[offs[rot][:, None] + _R2_10] = p8[pstart[rot]]
        u3 = cls == 2
        if u3.any():
            rows = p8[pstart[u3][:, None] + np.arange(3)].reshape(-1, 24)
            buf[offs[u3][:, None] + _R2_26] = rows
    out += buf.tobytes()


def _encode_records_loop(out: bytearray, cols: _Columns, compress: bool) -> None:
    code = cols.code.tolist()
    a = cols.a.tolist()
    b = cols.b.tolist()
    params = cols.params.tolist()
    extra = cols.extra.tolist()
    pi = xi = 0
    for i, op in enumerate(code):
        out.append(op)
        cls = op >> 5
        if cls == 5:
            cnt = a[i]
            _write_varint(out, cnt)
            for q in extra[xi:xi + cnt]:
                if compress:
                    _write_varint(out, q)
                else:
                    out += _PACK_U32(q)
            xi += cnt
            continue
        if compress:
            _write_varint(out, a[i])
        else:
            out += _PACK_U32(a[i])
        if cls == 1:
            out += _PACK_D(params[pi])
            pi += 1
        elif cls == 2:
            out += _PACK_D(params[pi]) + _PACK_D(params[pi + 1]) + _PACK_D(params[pi + 2])
            pi += 3
        elif cls >= 3:
            if compress:
                _write_varint(out, b[i])
            else:
                out += _PACK_U32(b[i])


def _encode_circuit(out: bytearray, c: Circuit, compress: bool) -> None:
    flat = flatten(c)
    if flat.num_qubits > _U32_MAX or flat.num_cbits > _U32_MAX:
        raise BisEncodeError("register width exceeds 32 bits")
    cols = flat._columns()
    if len(cols) > _U32_MAX:
        raise BisEncodeError("instruction count exceeds 32 bits")
    _write_varint(out, flat.num_qubits)
    _write_varint(out, flat.num_cbits)
    _write_varint(out, len(cols))
    if compress:
        _encode_records_compressed(out, cols)
    else:
        _encode_records_uncompressed(out, cols)


def encode(circuits, *, compress: bool = False) -> bytes:
    """Encode a circuit or a sequence of circuits into one stream."""
    if isinstance(circuits, Circuit):
        circuits = [circuits]
    else:
        circuits = list(circuits)
    out = bytearray(MAGIC)
    out.append(VERSION)
    out.append(FLAG_COMPRESSED if compress else 0)
    out += b"\x00\x00"
    _write_varint(out, len(circuits))
    for c in circuits:
        _encode_circuit(out, c, compress)
    return bytes(out)


# -- decoding: careful per-record path ----------------------------------------

def _parse_record(data, o: int, end: int, nq: int, nc: int, compress: bool,
                  code: list, a: list, b: list, params: list, extra: list) -> int:
    """Parse one record at ``o``, append its columns, return the next offset."""
    if o >= end:
        raise Truncated("record runs past end of data", o)
    rec_off = o
    op = data[o]
    o += 1
    if _U_STEP[op] == 0 and op != 0xA0:
        raise UnknownOpcode(f"unknown opcode 0x{op:02X}", rec_off)
    cls = op >> 5

    def read_index(limit: int, what: str) -> int:
        nonlocal o
        field = o
        if compress:
            v, o = _read_varint(data, o, end)
        else:
            if o + 4 > end:
                raise Truncated(f"{what} runs past end of data", field)
            v = _UNPACK_U32(data, field)[0]
            o += 4
        if v >= limit:
            raise BadOperand(f"{what} {v} out of range for {limit}", field)
        return v

    if cls == 5:  # barrier
        cnt_off = o
        cnt, o = _read_varint(data, o, end)
        if cnt < 1:
            raise BadOperand("barrier needs at least one qubit", cnt_off)
        qs = []
        for _ in range(cnt):
            qs.append(read_index(nq, "qubit index"))
        if len(set(qs)) != cnt:
            raise BadOperand("barrier qubits must be distinct", cnt_off)
        code.append(op)
        a.append(cnt)
        b.append(-1)
        extra.extend(qs)
        return o

    q0 = read_index(nq, "qubit index")
    if cls == 0:
        code.append(op)
        a.append(q0)
        b.append(-1)
        return o
    if cls == 1 or cls == 2:
        width = 8 if cls == 1 else 24
        if o + width > end:
            raise Truncated("angle runs past end of data", o)
        vals = _UNPACK_D(data, o) if cls == 1 else _UNPACK_3D(data, o)
        for k, v in enumerate(vals):
            if not math.isfinite(v):
                raise BadOperand("angle is not finite", o + 8 * k)
        code.append(op)
        a.append(q0)
        b.append(-1)
        params.extend(vals)
        return o + width
    if cls == 3:
        field = o
        q1 = read_index(nq, "qubit index")
        if q1 == q0:
            raise BadOperand("two-qubit gate operands must be distinct", field)
    else:  # measure
        q1 = read_index(nc, "cbit index")
    code.append(op)
    a.append(q0)
    b.append(q1)
    return o


def _careful_records(data, o: int, end: int, m: int, nq: int, nc: int,
                     compress: bool) -> tuple[_Columns, int]:
    code: list = []
    a: list = []
    b: list = []
    params: list = []
    extra: list = []
    for _ in range(m):
        o = _parse_record(data, o, end, nq, nc, compress, code, a, b, params, extra)
    cols = _Columns(
        np.array(code, dtype=np.uint8),
        np.array(a, dtype=np.int64),
        np.array(b, dtype=np.int64),
        np.array(params, dtype=np.float64),
        np.array(extra, dtype=np.int64),
    )
    return cols, o


# -- decoding: fast columnar path ---------------------------------------------

def _walk_offsets(data, o: int, end: int, m: int, step_lut) -> tuple[list, int] | None:
    """Record offsets assuming fixed-size records; None means fall back."""
    offs: list = []
    ap = offs.append
    try:
        for _ in range(m):
            step = step_lut[data[o]]
            if step == 0:
                return None
            ap(o)
            o += step
    except IndexError:
        return None
    if o > end:
        return None
    return offs, o


def _validate_fast(arr, offs, cls, a, b, params, nq, nc, a_off: int, b_off: int,
                   p_off: int) -> None:
    ok = a < nq
    if not ok.all():
        r = int(np.argmin(ok))
        raise BadOperand(f"qubit index {int(a[r])} out of range for {nq}",
                         int(offs[r]) + a_off)
    m3 = cls == 3
    if m3.any():
        b3 = b[m3]
        a3 = a[m3]
        bad = (b3 >= nq) | (b3 == a3)
        if bad.any():
            r = int(np.flatnonzero(m3)[int(np.argmax(bad))])
            msg = ("two-qubit gate operands must be distinct"
                   if b[r] == a[r] else f"qubit index {int(b[r])} out of range for {nq}")
            raise BadOperand(msg, int(offs[r]) + b_off)
    m4 = cls == 4
    if m4.any():
        b4 = b[m4]
        if (b4 >= nc).any():
            r = int(np.flatnonzero(m4)[int(np.argmax(b4 >= nc))])
            raise BadOperand(f"cbit index {int(b[r])} out of range for {nc}",
                             int(offs[r]) + b_off)
    if params.size:
        fin = np.isfinite(params)
        if not fin.all():
            p = int(np.argmin(fin))
            pend = np.cumsum(_PCOUNT_BY_CLASS[cls])
            r = int(np.searchsorted(pend, p, side="right"))
            pstart = int(pend[r]) - int(_PCOUNT_BY_CLASS[cls[r]])
            raise BadOperand("angle is not finite",
                             int(offs[r]) + p_off + 8 * (p - pstart))


def _gather_uncompressed(arr, offs_list, m: int, nq: int, nc: int) -> _Columns:
    offs = np.fromiter(offs_list, dtype=np.int64, count=m)
    codes = arr[offs]
    cls = codes >> 5
    a = arr[offs[:, None] + _R1_4].view("<u4").ravel().astype(np.int64)
    bcol = np.full(m, -1, dtype=np.int64)
    m34 = cls >= 3
    if m34.any():
        bcol[m34] = arr[offs[m34][:, None] + _R5_9].view("<u4").ravel()
    pc = _PCOUNT_BY_CLASS[cls]
    total_p = int(pc.sum())
    params = np.empty(total_p, dtype=np.float64)
    if total_p:
        pstart = np.cumsum(pc) - pc
        rot = cls == 1
        if rot.any():
            params[pstart[rot]] = arr[offs[rot][:, None] + _R5_13].view("<f8").ravel()
        u3 = cls == 2
        if u3.any():
            params[pstart[u3][:, None] + np.arange(3)] = (
                arr[offs[u3][:, None] + _R5_29].view("<f8").reshape(-1, 3))
    _validate_fast(arr, offs, cls, a, bcol, params, nq, nc, 1, 5, 5)
    return _Columns(codes, a, bcol, params,
                    np.empty(0, dtype=np.int64))


def _gather_compressed(arr, offs_list, m: int, nq: int, nc: int) -> _Columns | None:
    offs = np.fromiter(offs_list, dtype=np.int64, count=m)
    codes = arr[offs]
    cls = codes >> 5
    a8 = arr[offs + 1]
    if (a8 & 0x80).any():
        return None  # multi-byte or padded varint: careful path
    m34 = cls >= 3
    bcol = np.full(m, -1, dtype=np.int64)
    if m34.any():
        b8 = arr[offs[m34] + 2]
        if (b8 & 0x80).any():
            return None
        bcol[m34] = b8
    a = a8.astype(np.int64)
    pc = _PCOUNT_BY_CLASS[cls]
    total_p = int(pc.sum())
    params = np.empty(total_p, dtype=np.float64)
    if total_p:
        pstart = np.cumsum(pc) - pc
        rot = cls == 1
        if rot.any():
            params[pstart[rot]] = arr[offs[rot][:, None] + _R2_10].view("<f8").ravel()
        u3 = cls == 2
        if u3.any():
            params[pstart[u3][:, None] + np.arange(3)] = (
                arr[offs[u3][:, None] + _R2_26].view("<f8").reshape(-1, 3))
    _validate_fast(arr, offs, cls, a, bcol, params, nq, nc, 1, 2, 2)
    return _Columns(codes, a, bcol, params, np.empty(0, dtype=np.int64))


def _decode_circuit(data, arr, o: int, end: int, compress: bool) -> tuple[Circuit, int]:
    hdr = o
    nq, o = _read_varint(data, o, end)
    nc, o = _read_varint(data, o, end)
    m, o = _read_varint(data, o, end)
    min_rec = 2 if compress else 5
    if m > (end - o) // min_rec:
        raise Truncated(
            f"{m} records declared but only {end - o} bytes remain", hdr)
    cols = None
    new_o = o
    if m:
        walked = _walk_offsets(data, o, end, m, _C_STEP if compress else _U_STEP)
        if walked is not None:
            offs_list, new_o = walked
            if compress:
                cols = _gather_compressed(arr, offs_list, m, nq, nc)
            else:
                cols = _gather_uncompressed(arr, offs_list, m, nq, nc)
    if cols is None:
        cols, new_o = _careful_records(data, o, end, m, nq, nc, compress)
    return Circuit._from_columns(nq, nc, cols), new_o


def _parse_stream_header(data, end: int) -> tuple[bool, int, int]:
    """Returns (compressed, circuit_count, offset after header)."""
    if end < 4:
        # a strict prefix of the magic may just be an incomplete stream
        if bytes(data[:end]) == MAGIC[:end]:
            raise Truncated("stream header is incomplete", end)
        raise BadMagic("stream does not start with OBIS magic", 0)
    if bytes(data[:4]) != MAGIC:
        raise BadMagic("stream does not start with OBIS magic", 0)
    if end < _HEADER_LEN:
        raise Truncated("stream header is incomplete", end)
    if data[4] != VERSION:
        raise UnsupportedVersion(f"unsupported version {data[4]}", 4)
    flags = data[5]
    if flags & ~FLAG_COMPRESSED:
        raise ReservedBits(f"reserved flag bits set: 0x{flags:02X}", 5)
    if data[6] or data[7]:
        raise ReservedBits("reserved octets must be zero", 6 if data[6] else 7)
    count, o = _read_varint(data, _HEADER_LEN, end)
    return bool(flags & FLAG_COMPRESSED), count, o


def decode(data) -> list[Circuit]:
    """Decode a stream into its circuits."""
    if not isinstance(data, bytes):
        data = bytes(data)
    end = len(data)
    arr = np.frombuffer(data, dtype=np.uint8)
    compress, count, o = _parse_stream_header(data, end)
    # each circuit needs at least its three header varint bytes
    if count > (end - o) // 3:
        raise Truncated(
            f"{count} circuits declared but only {end - o} bytes remain", o)
    out = []
    for _ in range(count):
        c, o = _decode_circuit(data, arr, o, end, compress)
        out.append(c)
    if o != end:
        raise TrailingBytes(f"{end - o} trailing bytes after last circuit", o)
    return out


# -- streaming ----------------------------------------------------------------

class StreamEncoder:
    """Incremental encoder.

    Without a sink, circuits accumulate in memory and :meth:`finish` returns
    a stream byte-identical to ``encode(circuits)``.  With a seekable binary
    ``sink``, each circuit is written through as it arrives; the circuit
    count -- unknown until the end -- is reserved as a 5-octet padded varint
    and patched by :meth:`finish`.
    """

    def __init__(self, *, compress: bool = False, sink=None):
        self.compress = compress
        self._sink = sink
        self._count = 0
        self._finished = False
        if sink is None:
            self._chunks: list[bytearray] | None = []
        else:
            self._chunks = None
            head = bytearray(MAGIC)
            head.append(VERSION)
            head.append(FLAG_COMPRESSED if compress else 0)
            head += b"\x00\x00"
            self._count_pos = sink.tell() + len(head)
            _write_varint_padded5(head, 0)
            sink.write(bytes(head))

    @property
    def circuit_count(self) -> int:
        return self._count

    def add(self, circuit: Circuit) -> None:
        if self._finished:
            raise BisEncodeError("stream already finished")
        chunk = bytearray()
        _encode_circuit(chunk, circuit, self.compress)
        if self._sink is None:
            self._chunks.append(chunk)
        else:
            self._sink.write(bytes(chunk))
        self._count += 1

    def finish(self) -> bytes | None:
        if self._finished:
            raise BisEncodeError("stream already finished")
        self._finished = True
        if self._count > _U32_MAX:
            raise BisEncodeError("circuit count exceeds 32 bits")
        if self._sink is None:
            out = bytearray(MAGIC)
            out.append(VERSION)
            out.append(FLAG_COMPRESSED if self.compress else 0)
            out += b"\x00\x00"
            _write_varint(out, self._count)
            for chunk in self._chunks:
                out += chunk
            return bytes(out)
        end_pos = self._sink.tell()
        self._sink.seek(self._count_pos)
        patch = bytearray()
        _write_varint_padded5(patch, self._count)
        self._sink.write(bytes(patch))
        self._sink.seek(end_pos)
        return None


class StreamDecoder:
    """Incremental decoder: feed chunks, collect circuits as they complete.

    ``feed`` buffers input and returns every circuit completed so far;
    ``finish`` raises :class:`Truncated` if the stream stopped mid-way.
    Bytes after the declared circuit count raise :class:`TrailingBytes`.
    """

    _WANT_HEADER, _WANT_CIRCUIT, _DONE = range(3)

    def __init__(self):
        self._buf = bytearray()
        self._consumed = 0  # absolute offset of _buf[0] in the stream
        self._state = self._WANT_HEADER
        self._compress = False
        self._remaining = 0
        # in-progress circuit
        self._have_sizes = False
        self._nq = self._nc = self._m = 0
        self._records_done = 0
        self._cols: tuple[list, list, list, list, list] | None = None

    def feed(self, data) -> list[Circuit]:
        self._buf += data
        out: list[Circuit] = []
        buf = self._buf
        end = len(buf)
        pos = 0

        def absolutize(err: BisDecodeError) -> BisDecodeError:
            msg = str(err).rsplit(" (at byte ", 1)[0]
            return type(err)(msg, err.offset + self._consumed)

        try:
            while True:
                if self._state == self._DONE:
                    if pos < end:
                        raise TrailingBytes(
                            f"{end - pos} trailing bytes after last circuit", pos)
                    break
                if self._state == self._WANT_HEADER:
                    try:
                        self._compress, self._remaining, pos = \
                            _parse_stream_header(buf, end)
                    except Truncated:
                        break  # need more bytes
                    self._state = (self._WANT_CIRCUIT if self._remaining
                                   else self._DONE)
                    continue
                # WANT_CIRCUIT
                if not self._have_sizes:
                    try:
                        nq, o = _read_varint(buf, pos, end)
                        nc, o = _read_varint(buf, o, end)
                        m, o = _read_varint(buf, o, end)
                    except Truncated:
                        break
                    self._nq, self._nc, self._m = nq, nc, m
                    self._have_sizes = True
                    self._records_done = 0
                    self._cols = ([], [], [], [], [])
                    pos = o
                code, a, b, params, extra = self._cols
                while self._records_done < self._m:
                    try:
                        pos = _parse_record(buf, pos, end, self._nq, self._nc,
                                            self._compress, code, a, b, params,
                                            extra)
                    except Truncated:
                        raise _NeedMore from None
                    self._records_done += 1
                cols = _Columns(
                    np.array(code, dtype=np.uint8),
                    np.array(a, dtype=np.int64),
                    np.array(b, dtype=np.int64),
                    np.array(params, dtype=np.float64),
                    np.array(extra, dtype=np.int64),
                )
                out.append(Circuit._from_columns(self._nq, self._nc, cols))
                self._have_sizes = False
                self._cols = None
                self._remaining -= 1
                if not self._remaining:
                    self._state = self._DONE
        except _NeedMore:
            pass
        except BisDecodeError as e:
            raise absolutize(e) from None
        # drop consumed bytes; keep unconsumed tail
        del self._buf[:pos]
        self._consumed += pos
        return out

    def finish(self) -> None:
        if self._state != self._DONE:
            raise Truncated("stream ended before the declared circuits",
                            self._consumed + len(self._buf))
        if self._buf:
            raise TrailingBytes(
                f"{len(self._buf)} trailing bytes after last circuit",
                self._consumed)


class _NeedMore(Exception):
    pass
