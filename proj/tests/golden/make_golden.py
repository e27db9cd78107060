#!/usr/bin/env python3
"""Writes the golden AER streams straight from the byte layout.

Header: b"AER1", u8 version (1), u8 channel count, u32 tick_ns, u32 spike
count, all little-endian. Payload: u16 words, address in the top 6 bits and
tick delta in the low 10; address 63 advances 1023 ticks without a spike.
"""
import pathlib
import struct

HERE = pathlib.Path(__file__).resolve().parent


def stream(channels, tick_ns, words):
    spikes = sum(1 for a, _ in words if a != 63)
    body = b"".join(struct.pack("<H", (a << 10) | d) for a, d in words)
    return b"AER1" + struct.pack("<BBII", 1, channels, tick_ns, spikes) + body


CASES = {
    # (ch 3, 5 ms), (ch 3, 7 ms) at 1 ms ticks.
    "two_events.aer": stream(24, 1_000_000, [(3, 5), (3, 2)]),
    # (ch 1, 0 ms), (ch 1, 2000 ms): 2000 = 1023 + 977.
    "wrap.aer": stream(24, 1_000_000, [(1, 0), (63, 1023), (1, 977)]),
    "empty.aer": stream(24, 1_000_000, []),
    # ON at ch 2 / 4 ms and ch 0 / 9 ms, OFF for ch 5 (address 29) at 9 ms.
    "sod_full.aer": stream(48, 1_000_000, [(2, 4), (0, 5), (29, 0)]),
    # 1/16 ms ticks: 3.5 ms -> 56, 5.1 ms -> 81.6 -> 82, 5.1 ms on ch 7 -> 82.
    "ttfs.aer": stream(24, 62_500, [(4, 56), (2, 26), (7, 0)]),
}

if __name__ == "__main__":
    for name, data in CASES.items():
        (HERE / name).write_bytes(data)
