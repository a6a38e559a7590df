"""Wire framing shared by every protocol.

A message is ``protocol_id (1 byte) || msg_type (1 byte) || fields``, where
each field is a 4-byte big-endian length followed by that many bytes.
"""

from .errors import MalformedMessage

SCHNORR = 0x01
OKAMOTO = 0x02
PEDERSEN = 0x03
ISO_KE = 0x04
SIGMA = 0x05
TLS = 0x06
DISTANCE_BOUNDING = 0x07
PRE = 0x08
BASELINE_KE = 0x09

PROTOCOL_NAMES = {
    SCHNORR: "schnorr",
    OKAMOTO: "okamoto",
    PEDERSEN: "pedersen",
    ISO_KE: "iso-ke",
    SIGMA: "sigma",
    TLS: "tls",
    DISTANCE_BOUNDING: "distance-bounding",
    PRE: "pre",
    BASELINE_KE: "baseline",
}


def lp(field):
    return len(field).to_bytes(4, "big") + field


def split_fields(data):
    fields = []
    i = 0
    while i < len(data):
        if i + 4 > len(data):
            raise MalformedMessage("truncated length prefix")
        n = int.from_bytes(data[i:i + 4], "big")
        i += 4
        if i + n > len(data):
            raise MalformedMessage("truncated field")
        fields.append(data[i:i + n])
        i += n
    return fields


def pack(protocol_id, msg_type, *fields):
    return bytes((protocol_id, msg_type)) + b"".join(lp(f) for f in fields)


def header(data):
    if len(data) < 2:
        raise MalformedMessage("message shorter than its header")
    return data[0], data[1]


def unpack(data, protocol_id, msg_type, count=None):
    """Return the fields of ``data`` after checking its header and field count."""
    pid, mtype = header(data)
    if pid != protocol_id:
        raise MalformedMessage(f"protocol id {pid:#04x}, expected {protocol_id:#04x}")
    if mtype != msg_type:
        raise MalformedMessage(f"message type {mtype}, expected {msg_type}")
    fields = split_fields(data[2:])
    if count is not None and len(fields) != count:
        raise MalformedMessage(f"{len(fields)} fields, expected {count}")
    return fields
