#!/usr/bin/env python3
"""Write the 60-trial event log used by the report tests.

Each row is (truth, machine rate, human rate). Answers with rate r keep the
first r characters and replace the rest with a letter that cannot match.
"""
import json
import sys

ROWS = """CYMW 4 4|CYMW 4 4|NCDN 4 4|NCDN 4 4|MHEM 4 4|YKTZ 4 3|YKTZ 4 4|PRYV 4 4|AMTW 4 3|DBIK 3 4|
ANXW 4 4|PFOQ 4 4|BQQW 4 4|PVOM 4 4|WLPE 4 3|GWQV 3 4|HZNF 4 4|AZCT 4 4|MTFA 4 4|STLQ 4 4|
ONOT 4 4|CIHF 3 4|LKOG 4 4|HWRK 3 4|QTVX 2 4|GPKD 3 4|IUQH 4 3|KFVZ 4 2|GFAS 3 3|VCTD 3 3|
OJOH 4 3|OBWS 4 3|DZPJ 3 2|VDPX 3 3|CRYP 3 4|CDTR 3 2|WPZQ 4 3|LOWG 4 3|ZAPU 3 3|RRDN 1 3|
HLRX 3 0|PPWL 4 1|AYSC 4 3|KXWD 3 4|UHTU 4 0|PWMD 4 4|FKZL 4 3|MZOG 4 3|KYPN 4 4|VDWX 3 4|
ULHE 4 3|CSWI 4 3|JFZP 3 4|JSBC 4 3|KAAE 3 4|OFRZ 4 3|GNRP 2 3|QBKU 4 3|EYIN 3 4|KWQX 4 4"""


def degrade(truth, rate):
    out = list(truth)
    for i in range(rate, len(truth)):
        out[i] = "Z" if truth[i] != "Z" else "Y"
    return "".join(out)


def main(path):
    rows = [r.split() for r in ROWS.replace("\n", "").split("|")]
    assert len(rows) == 60
    m = sum(int(r[1]) for r in rows)
    h = sum(int(r[2]) for r in rows)
    print(f"machine {m}/240 = {m / 2.4:.4f}%  human {h}/240 = {h / 2.4:.4f}%", file=sys.stderr)
    print(f"full machine {sum(r[1] == '4' for r in rows)}/60  human {sum(r[2] == '4' for r in rows)}/60",
          file=sys.stderr)
    with open(path, "w") as f:
        for i, (truth, mr, hr) in enumerate(rows, start=1):
            tid = f"T{i:06d}"
            trial = {"ev": "trial", "trial_id": tid, "created_at": "2013-11-18T00:00:00Z",
                     "text": truth, "seed": i, "canvas": [200, 60], "shadow_intensity": 160,
                     "ink_intensity": 0, "shift": [-6, 0], "line_count_range": [2, 4],
                     "noise_density": 0.05, "font_id": 0, "scale": 2, "origin": [20, 14],
                     "spacing": 40, "truth": truth}
            f.write(json.dumps(trial, separators=(",", ":")) + "\n")
            for client, role, rate in (("ocr-1", "machine", int(mr)), (f"student-{(i - 1) // 10 + 1}", "human", int(hr))):
                ans = {"ev": "answer", "trial_id": tid, "client_id": client, "role": role,
                       "text": degrade(truth, rate), "rate": rate}
                f.write(json.dumps(ans, separators=(",", ":")) + "\n")


if __name__ == "__main__":
    main(sys.argv[1])
