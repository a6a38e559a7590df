"""
Key exchange between two devices, and what goes wrong without identity binding
================================================================================

ISO-KE signs both exponents together with the peer's certificate.  The
baseline variant signs only the exponents, which lets an insider rebind the
initiator's identity.  SIGMA additionally keeps identities off the wire.
"""

from hansec.sim import D2DW, D2DWL, DeviceProfile, run_scenario

phone = DeviceProfile("phone", "phone", (0, 0), {D2DWL, D2DW})
lock = DeviceProfile("lock", "lock", (5, 0), {D2DWL, D2DW})
devices = [phone, lock]

# %% Honest runs: message counts and per-device exponentiations
for protocol in ("iso-ke", "sigma", "tls"):
    out = run_scenario(devices, protocol, "none", seed=1)
    print(f"{protocol:7s} {out.verdict}  messages={out.metrics['messages']}  "
          f"exponentiations={out.metrics['exponentiations']}")

# %% An insider substitutes its own certificate for the phone's
for protocol in ("baseline", "iso-ke", "sigma"):
    out = run_scenario(devices, protocol, "misbinder", seed=1)
    print(f"{protocol:8s} vs misbinder: {out.verdict}")
    for ev in out.evidence:
        print("   evidence:", ev.kind, ev.detail)

# %% Reflection: the phone's own messages are bounced back to it
for protocol in ("baseline", "iso-ke"):
    print(f"{protocol:8s} vs reflector:", run_scenario(devices, protocol, "reflector", seed=1).verdict)

# %% A passive listener looks for device names in the bytes on the wire
for protocol in ("iso-ke", "sigma"):
    out = run_scenario(devices, protocol, "eavesdropper", seed=1)
    print(f"{protocol:7s} vs eavesdropper: {out.verdict}")

# %% The transcript of one attack, record by record
out = run_scenario(devices, "iso-ke", "misbinder", seed=1)
for rec in out.transcript:
    print(rec.seq, rec.sim_time_ns, rec.sender, "->", rec.receiver, "type", rec.msg_type,
          rec.adversary_action or "")
