"""Wire transcript of a simulated run and its JSON-lines export."""

import json
from dataclasses import dataclass


@dataclass(frozen=True)
class TranscriptRecord:
    seq: int
    sim_time_ns: int
    sender: str
    receiver: str
    protocol_id: int
    msg_type: int
    payload: bytes
    adversary_action: str = None

    def to_dict(self):
        d = {
            "seq": self.seq,
            "sim_time_ns": self.sim_time_ns,
            "sender": self.sender,
            "receiver": self.receiver,
            "protocol_id": self.protocol_id,
            "msg_type": self.msg_type,
            "payload_hex": self.payload.hex(),
        }
        if self.adversary_action is not None:
            d["adversary_action"] = self.adversary_action
        return d


class Transcript:
    def __init__(self):
        self.records = []

    def add(self, sim_time_ns, sender, receiver, payload, adversary_action=None):
        pid, mtype = (payload[0], payload[1]) if len(payload) >= 2 else (0, 0)
        rec = TranscriptRecord(len(self.records), sim_time_ns, sender, receiver, pid, mtype, bytes(payload),
                               adversary_action)
        self.records.append(rec)
        return rec

    def __iter__(self):
        return iter(self.records)

    def __len__(self):
        return len(self.records)

    def delivered(self):
        return [r for r in self.records if r.adversary_action != "drop"]

    def protocol_records(self, protocol_id):
        return [r for r in self.records if r.protocol_id == protocol_id]

    def contains(self, needle):
        return any(needle in r.payload for r in self.records)

    def to_jsonl(self):
        return "".join(json.dumps(r.to_dict(), sort_keys=True) + "\n" for r in self.records)


def transcript_export(outcome, path):
    """Write the outcome's transcript as one JSON object per line."""
    text = outcome.transcript.to_jsonl()
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
    return path


def read_transcript(path):
    with open(path, encoding="utf-8") as fh:
        return [json.loads(line) for line in fh if line.strip()]
