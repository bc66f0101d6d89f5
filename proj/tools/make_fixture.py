#!/usr/bin/env python3
"""Writes the synthetic charting corpus used by the tests.

Rows follow the public points-file layout (match_id, Pts, Svr, 1st, 2nd).
About 80% of rally shots are forehands/backhands, the rest special types.
A handful of rows are deliberately malformed. Output is deterministic.

    python3 tools/make_fixture.py tests/fixtures/charting_fixture.csv
"""

import csv
import random
import sys

PLAYERS = [
    "Novak_Djokovic", "Rafael_Nadal", "Roger_Federer", "Daniil_Medvedev",
    "Alexander_Zverev", "Dominic_Thiem", "Stefanos_Tsitsipas", "Casper_Ruud",
]
SPECIAL = "rsvzopuylmhijktq"
POINT_LABELS = ["0", "15", "30", "40"]


def score_label(rng):
    if rng.random() < 0.08:  # tiebreak
        a, b = rng.randrange(0, 8), rng.randrange(0, 8)
        return f"{a}-{b}"
    a, b = rng.randrange(0, 4), rng.randrange(0, 4)
    if a == 3 and b == 3 and rng.random() < 0.4:
        return rng.choice(["AD-40", "40-AD"])
    return f"{POINT_LABELS[a]}-{POINT_LABELS[b]}"


def serve(rng, second, skill):
    d = str(rng.choice([4, 5, 6]))
    u = rng.random()
    fault_p = (0.08 if second else 0.35) + skill["serve_fault"]
    if u < fault_p:
        return d + rng.choice("nwdx") + rng.choice(["", "", "@", "#"]), "fault"
    if u < fault_p + (0.03 if second else 0.09):
        return d + rng.choice(["*", "*", "#"]), "ace"
    return d, "in"


def rally(rng, skills, server_idx):
    out = []
    hitter = 1 - server_idx
    n = 0
    while True:
        n += 1
        kind = rng.choice("fb") if rng.random() < 0.8 else rng.choice(SPECIAL)
        shot = kind + str(rng.choice([1, 2, 3]))
        if n == 1 and rng.random() < 0.5:
            shot += str(rng.choice([7, 8, 9]))
        sk = skills[hitter]
        u = rng.random()
        if u < 0.06 + sk["winner"] or n > 40:
            out.append(shot + "*")
            return "".join(out)
        if u < 0.06 + sk["winner"] + 0.11 + sk["error"]:
            tail = rng.choice(["n", "w", "d", "x", "nw", "wd"]) + rng.choice(["@", "#", ""])
            out.append(shot + tail)
            return "".join(out)
        out.append(shot)
        hitter = 1 - hitter


def main(path):
    rng = random.Random(20240617)
    skill = {p: {"winner": 0.0, "error": 0.0, "serve_fault": 0.0} for p in PLAYERS}
    skill["Novak_Djokovic"] = {"winner": 0.02, "error": -0.04, "serve_fault": -0.05}
    rows = []
    for m in range(40):
        year = 2017 + m % 7
        p1, p2 = rng.sample(PLAYERS, 2)
        if m % 4 == 0 and "Novak_Djokovic" not in (p1, p2):
            p1 = "Novak_Djokovic"
        match_id = f"{year}0{1 + m % 9}{10 + m % 18}-M-Fixture_Open-R{m % 5}-{p1}-{p2}"
        for pt in range(90):
            svr = 1 + (pt // 6) % 2
            names = [p1, p2]
            server_idx = svr - 1
            skills = [skill[p1], skill[p2]]
            first, status = serve(rng, False, skills[server_idx])
            second = ""
            if status == "in":
                first += rally(rng, skills, server_idx)
            elif status == "fault":
                second, s2 = serve(rng, True, skills[server_idx])
                if s2 == "in":
                    second += rally(rng, skills, server_idx)
            rows.append([match_id, pt + 1, score_label(rng), svr, first, second])
    # Malformed rows: unknown character, missing terminal, bad server index.
    bad = rows[0][0]
    rows.append([bad, 9001, "15-0", 1, "4f1Q*", ""])
    rows.append([bad, 9002, "15-15", 2, "5f2b3", ""])
    rows.append([bad, 9003, "30-15", 7, "6*", ""])
    with open(path, "w", newline="", encoding="utf-8") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["match_id", "Pt", "Pts", "Svr", "1st", "2nd"])
        w.writerows(rows)


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "tests/fixtures/charting_fixture.csv")
