#!/usr/bin/env python3
"""Writes the stored LLM responses under fixtures/ and the hand scores.

Every response is written out explicitly here together with the verdict a
human reader assigns to it, so the scores do not depend on the Rust scoring
code. Discrete-gait answers for STAND_3LEGS are the exception: which leg the
random generator lifts is only known after materialization, so those cells
are marked "inspect" and were filled in by looking at the generated
templates (see fixtures/README.md).

Run from the repository root: python3 scripts/make_fixtures.py
"""

import csv
import math
import pathlib
import re
import shutil

ROOT = pathlib.Path(__file__).resolve().parent.parent / "fixtures"


def slug(command):
    return "-".join(s.lower() for s in re.split(r"[^A-Za-z0-9]+", command) if s)


def block(rows, v, extra=""):
    fl, fr, rl, rr = rows
    assert len({len(fl), len(fr), len(rl), len(rr)}) == 1
    return f"velocity: {v}\nFL: {fl}\nFR: {fr}\nRL: {rl}\nRR: {rr}\n{extra}"


def ones_at(t, start, n):
    return "".join("1" if (i - start) % t < n else "0" for i in range(t))


def trot(t, n):
    fl = ones_at(t, 0, n)
    fr = ones_at(t, t - n, n)
    return (fl, fr, fr, fl)


def pace(t, n):
    fl = ones_at(t, 0, n)
    fr = ones_at(t, t - n, n)
    return (fl, fr, fl, fr)


def bound(t, n, shift):
    front = ones_at(t, 0, n)
    rear = ones_at(t, shift, n)
    return (front, front, rear, rear)


def stand(t):
    return ("1" * t,) * 4


def lift(t, leg):
    return tuple("0" * t if i == leg else "1" * t for i in range(4))


GAIT = {"BOUND": lambda t: bound(t, t // 2, t // 4), "TROT": lambda t: trot(t, (t * 5) // 8), "PACE": lambda t: pace(t, t // 2)}

LEGS = ["front left", "front right", "rear left", "rear right"]
GAITS = [("BOUND", "Bound"), ("TROT", "Trot"), ("PACE", "Pace")]
SPEEDS = [("forward slowly", "0.5"), ("forward fast", "1.0"), ("backward slowly", "-0.5"), ("backward fast", "-1.0")]

COMMANDS = ["Stand still"]
COMMANDS += [f"Lift {leg} leg" for leg in LEGS]
COMMANDS += [f"{name} in place" for _, name in GAITS]
for words, _ in SPEEDS:
    COMMANDS += [f"{name} {words}" for _, name in GAITS]
COMMANDS += [
    "Trot in place, with a suspension phase where all feet are off the ground",
    "Trot forward, with the front right leg moving at a higher frequency",
    "Stand on front right and rear left legs",
    "Walk with 3 legs, with the rear right foot always in the air",
    "Bound then pace, you can extend the pattern length if necessary",
]
assert len(COMMANDS) == 25

CYCLES = [16, 20, 24, 16, 20]


def fence(text):
    return f"```\n{text}```\n"


# ---------------------------------------------------------------- main ----

def main_responses(cid):
    """Five (response, correct) pairs for command `cid` (1-based)."""
    out = []
    if cid == 1:
        return [(block(stand(t), "0.0"), True) for t in CYCLES]
    if 2 <= cid <= 5:
        return [(block(lift(t, cid - 2), "0.0"), True) for t in CYCLES]
    if 6 <= cid <= 20:
        gait, _ = GAITS[(cid - 6) % 3]
        v = "0.0" if cid <= 8 else SPEEDS[(cid - 9) // 3][1]
        for k, t in enumerate(CYCLES):
            text = block(GAIT[gait](t), v)
            if k == 1:
                text = "Sure, here is the pattern:\n" + fence(text)
            out.append((text, True))
        return out
    if cid == 21:
        # only the first trial contains all-zero columns; one trial invents an S row
        susp = trot(24, 8)
        return [
            (block(susp, "0.0"), True),
            (block(trot(16, 10), "0.0"), False),
            (block(trot(20, 12), "0.0", extra="S: " + "0" * 20 + "\n"), False),
            (block(trot(24, 14), "0.0"), False),
            (block(trot(16, 9), "0.0"), False),
        ]
    if cid == 22:
        for t in CYCLES:
            half = t // 2
            fl = ones_at(t, 0, half)
            fr = ones_at(t // 2, 0, t // 4) * 2
            rl = ones_at(t, half, half)
            out.append((block((fl, fr, rl, fl), "0.5"), True))
        return out
    if cid == 23:
        return [(block(("0" * t, "1" * t, "1" * t, "0" * t), "0.0"), True) for t in CYCLES]
    if cid == 24:
        for t in CYCLES:
            third = t // 3
            fl = ones_at(t, 0, 2 * third)
            fr = ones_at(t, third, 2 * third)
            rl = ones_at(t, 2 * third, 2 * third)
            out.append((block((fl, fr, rl, "0" * t), "0.5"), True))
        return out
    if cid == 25:
        for k, (tb, tp) in enumerate([(12, 12), (16, 16), (12, 16), (16, 12), (12, 12)]):
            b = bound(tb, tb // 2, tb // 4)
            p = pace(tp, tp // 2)
            rows = tuple(b[i] + p[i] for i in range(4))
            if k == 4:
                # forgot the pace half
                out.append((block(bound(24, 12, 6), "0.5"), False))
            else:
                out.append((block(rows, "0.5"), True))
        return out
    raise ValueError(cid)


# ----------------------------------------------------------- baseline 1 ----

def b1(gait, v):
    return f"gait: {gait}, velocity: {v}\n"


def baseline1_responses(cid):
    if cid == 1:
        return [(b1("STAND_STILL", "0.0"), True)] * 5
    if 2 <= cid <= 5:
        return [(b1("STAND_3LEGS", "0.0"), "inspect")] * 5
    if 6 <= cid <= 20:
        gait, _ = GAITS[(cid - 6) % 3]
        v = "0.0" if cid <= 8 else SPEEDS[(cid - 9) // 3][1]
        out = [(b1(gait, v), True)] * 5
        if cid == 15:
            # slow/fast confusion
            out[3] = (b1(gait, "-1.0"), False)
        if cid == 11:
            out[0] = (b1("TROT", "0.5"), False)
        return out
    if cid == 21:
        return [(b1("TROT", "0.0"), False)] * 5
    if cid == 22:
        return [(b1("TROT", "0.5"), False)] * 4 + [(b1("TROT", "1.0"), False)]
    if cid == 23:
        return [(b1("STAND_3LEGS", "0.0"), False)] * 5
    if cid == 24:
        return [(b1("STAND_3LEGS", "0.0"), False)] * 3 + [(b1("WALK", "0.5"), False), (b1("TROT", "0.5"), False)]
    if cid == 25:
        return [(b1("BOUND", "0.5"), False)] * 3 + [(b1("PACE", "0.5"), False)] * 2
    raise ValueError(cid)


# ----------------------------------------------------------- baseline 2 ----

TAU = 2 * math.pi


def b2(t, v, feet):
    lines = [f"T: {t}", f"velocity: {v}"]
    for label, (a, b, c) in zip(["FL", "FR", "RL", "RR"], feet):
        lines.append(f"{label}: ({a:.4f}, {b:.4f}, {c:.2f})")
    return "\n".join(lines) + "\n"


def sine_rows(t, feet):
    """Reference encoding used only to sanity-check intent below."""
    return tuple(
        "".join("1" if math.sin(a * k + b) <= c + 1e-9 else "0" for k in range(1, t + 1)) for a, b, c in feet
    )


def trot_feet(a, c, dphi=math.pi):
    return [(a, 0.0, c), (a, dphi, c), (a, dphi, c), (a, 0.0, c)]


def pace_feet(a, c, dphi=math.pi):
    return [(a, 0.0, c), (a, dphi, c), (a, 0.0, c), (a, dphi, c)]


def bound_feet(a, c, rear):
    return [(a, 0.0, c), (a, 0.0, c), (a, rear, c), (a, rear, c)]


def baseline2_responses(cid):
    a24 = TAU / 24
    if cid == 1:
        return [(b2(24, "0.0", [(a24, 0.0, 1.0)] * 4), True)] * 3 + [
            (b2(24, "0.0", [(0.0, 0.0, 0.0)] * 4), True),
            (b2(24, "0.0", [(a24, 0.0, 0.9)] * 4), False),
        ]
    if 2 <= cid <= 5:
        leg = cid - 2
        good = [(a24, 0.0, -1.5) if i == leg else (a24, 0.0, 1.0) for i in range(4)]
        touch = [(a24, 0.0, -1.0) if i == leg else (a24, 0.0, 1.0) for i in range(4)]
        wrong_leg = [(a24, 0.0, -1.5) if i == (leg + 1) % 4 else (a24, 0.0, 1.0) for i in range(4)]
        return [
            (b2(24, "0.0", good), True),
            (b2(24, "0.0", touch), False),
            (b2(24, "0.0", wrong_leg), False),
            (b2(24, "0.0", good), True),
            (b2(24, "0.0", touch), False),
        ]
    if 6 <= cid <= 20:
        gait, _ = GAITS[(cid - 6) % 3]
        v = "0.0" if cid <= 8 else SPEEDS[(cid - 9) // 3][1]
        if gait == "TROT":
            good = b2(24, v, trot_feet(a24, 0.2))
            quarter = b2(24, v, trot_feet(a24, 0.2, math.pi / 2))
            heavy = b2(24, v, trot_feet(a24, 0.9))
            return [(good, True), (quarter, False), (heavy, False), (good, True), (quarter, False)]
        if gait == "PACE":
            good = b2(12, v, pace_feet(TAU / 12, 0.2))
            trot_like = b2(24, v, trot_feet(a24, 0.2))
            return [(trot_like, False), (good, True), (trot_like, False), (trot_like, False), (good, True)]
        good = b2(24, v, bound_feet(a24, 0.2, -math.pi / 3))
        in_phase = b2(24, v, bound_feet(a24, 0.2, 0.0))
        lateral = b2(24, v, pace_feet(a24, 0.2))
        return [(in_phase, False), (good, True), (lateral, False), (in_phase, False), (good, True)]
    if cid == 21:
        return [(b2(24, "0.0", trot_feet(a24, 0.2)), False)] * 4 + [(b2(24, "0.0", trot_feet(a24, -0.3)), True)]
    if cid == 22:
        fast = [(a24, 0.0, 0.2), (2 * a24, math.pi, 0.2), (a24, math.pi, 0.2), (a24, 0.0, 0.2)]
        return [(b2(24, "0.5", trot_feet(a24, 0.2)), False)] * 3 + [(b2(24, "0.5", fast), True)] * 2
    if cid == 23:
        diag = [(a24, 0.0, -1.5), (a24, 0.0, 1.0), (a24, 0.0, 1.0), (a24, 0.0, -1.5)]
        swapped = [(a24, 0.0, 1.0), (a24, 0.0, -1.5), (a24, 0.0, -1.5), (a24, 0.0, 1.0)]
        return [(b2(24, "0.0", swapped), False)] * 3 + [(b2(24, "0.0", diag), True)] * 2
    if cid == 24:
        walk = [(a24, 0.0, 0.5), (a24, TAU / 3, 0.5), (a24, 2 * TAU / 3, 0.5), (a24, 0.0, -1.5)]
        grounded = [(a24, 0.0, 0.5), (a24, TAU / 3, 0.5), (a24, 2 * TAU / 3, 0.5), (a24, 0.0, -1.0)]
        return [(b2(24, "0.5", walk), True), (b2(24, "0.5", grounded), False)] * 2 + [(b2(24, "0.5", grounded), False)]
    if cid == 25:
        return [(b2(24, "0.5", bound_feet(a24, 0.2, -math.pi / 3)), False)] * 5
    raise ValueError(cid)


def check_b2_intent():
    """Cheap structural asserts on the sinusoid fixtures whose verdict hinges on rounding."""
    a24 = TAU / 24
    touch = sine_rows(24, [(a24, 0.0, -1.0)])[0]
    assert touch.count("1") == 1, touch
    susp = sine_rows(24, trot_feet(a24, -0.3))
    assert any(all(r[k] == "0" for r in susp) for k in range(24))
    quarter = sine_rows(24, trot_feet(a24, 0.2, math.pi / 2))
    assert quarter[0] != quarter[1]


TABLE2 = [
    ("Good news, we are going to a picnic!", [(block(bound(16, 8, 4), "0.0"), True)] * 4 + [(block(trot(16, 10), "0.5"), False)]),
    ("Back off, don't hurt that squirrel!", [(block(trot(20, 12), "-0.5"), True)] * 5),
    (
        "Act as if the ground is very hot",
        [(block(pace(12, 6), "1.0"), True)] * 3 + [(block(pace(12, 6), "0.5"), False), (block(trot(12, 7), "1.0"), False)],
    ),
    (
        "Act as if you have a limping rear left leg",
        [(block(("1100", "0110", "1000", "0011"), "0.5"), True)] * 4 + [(block(lift(16, 2), "0.0"), False)],
    ),
    ("Go catch that squirrel on the tree", [(block(bound(12, 6, 3), "1.0"), True)] * 5),
]


def write(style, command, trial, text):
    path = ROOT / style / slug(command) / f"trial_{trial}.txt"
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)


def main():
    check_b2_intent()
    for style in ("main", "baseline1", "baseline2"):
        shutil.rmtree(ROOT / style, ignore_errors=True)
    rows = []
    for style, fn in (("main", main_responses), ("baseline1", baseline1_responses), ("baseline2", baseline2_responses)):
        for cid, command in enumerate(COMMANDS, start=1):
            responses = fn(cid)
            assert len(responses) == 5, (style, cid)
            for k, (text, verdict) in enumerate(responses, start=1):
                write(style, command, k, text)
                rows.append({"suite": "table1", "approach": style, "id": cid, "trial": k, "correct": verdict})
    for cid, (command, responses) in enumerate(TABLE2, start=1):
        for k, (text, verdict) in enumerate(responses, start=1):
            write("main", command, k, text)
            rows.append({"suite": "table2", "approach": "main", "id": cid, "trial": k, "correct": verdict})

    # keep cells already scored by inspection
    scores = ROOT / "hand_scores.csv"
    previous = {}
    if scores.exists():
        with scores.open() as f:
            for r in csv.DictReader(f):
                previous[(r["suite"], r["approach"], r["id"], r["trial"])] = r["correct"]
    with scores.open("w", newline="") as f:
        w = csv.DictWriter(f, fieldnames=["suite", "approach", "id", "trial", "correct"], lineterminator="\n")
        w.writeheader()
        for r in rows:
            v = r["correct"]
            if v == "inspect":
                v = previous.get((r["suite"], r["approach"], str(r["id"]), str(r["trial"])), "inspect")
            else:
                v = "1" if v else "0"
            w.writerow({**r, "correct": v})


if __name__ == "__main__":
    main()
