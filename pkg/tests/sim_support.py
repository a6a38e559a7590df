from hansec.sim import D2DW, D2DWL, O2C, DeviceProfile

ID_PROTOCOLS = ("schnorr", "okamoto")


def devices_for(protocol):
    """Initiator first: a phone and a lock for device-to-device work, owner and cloud for proofs."""
    if protocol in ID_PROTOCOLS:
        return [DeviceProfile("owner", "owner", (0, 0), {O2C}), DeviceProfile("cloud", "cloud", (0, 0), {O2C})]
    return [DeviceProfile("phone", "phone", (0, 0), {D2DWL, D2DW}),
            DeviceProfile("lock", "lock", (5, 0), {D2DWL, D2DW})]
