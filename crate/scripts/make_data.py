#!/usr/bin/env python3
"""Regenerates the synthetic sample datasets in data/ (deterministic)."""
import random
from pathlib import Path

DATA = Path(__file__).resolve().parent.parent / "data"
DAY = 86400


def interactions():
    # a small Q&A forum: questions get bursts of answers and comments
    rng = random.Random(7)
    start = 1_230_768_000  # 2009-01-01
    users = [f"u{i}" for i in range(60)]
    weights = [1.0 / (i + 1) ** 0.8 for i in range(len(users))]
    rows = []
    t = start
    while len(rows) < 1500:
        t += rng.randint(600, 7200)
        asker = rng.choices(users, weights)[0]
        repliers = [u for u in rng.choices(users, weights, k=rng.randint(1, 4)) if u != asker]
        tt = t
        for r in repliers:
            tt += rng.randint(30, 1800)
            rows.append((r, asker, tt, "answer"))
            if rng.random() < 0.5:
                tt += rng.randint(30, 900)
                rows.append((asker, r, tt, "comment"))
            if rng.random() < 0.2:
                tt += rng.randint(30, 900)
                rows.append((r, asker, tt, "comment"))
    rows.sort(key=lambda r: r[2])
    with open(DATA / "interactions.csv", "w") as f:
        f.write("src,dst,time,kind\n")
        for s, d, tt, k in rows:
            f.write(f"{s},{d},{tt},{k}\n")


def transactions():
    # monthly-active payment network with a few hubs that rise and fade
    rng = random.Random(11)
    start = 1_577_836_800  # 2020-01-01
    accounts = [f"acct{i:02d}" for i in range(40)]
    rows = []
    for month in range(12):
        hubs = accounts[month % 5 :: 7][:3]
        for _ in range(200):
            t = start + month * 30 * DAY + rng.randint(0, 30 * DAY - 1)
            src = rng.choice(accounts)
            dst = rng.choice(hubs) if rng.random() < 0.4 else rng.choice(accounts)
            if src == dst:
                continue
            amount = round(rng.lognormvariate(3, 1), 2)
            rows.append((src, dst, t, amount))
    rows.sort(key=lambda r: r[2])
    with open(DATA / "transactions.csv", "w") as f:
        f.write("src,dst,time,amount\n")
        for s, d, t, a in rows:
            f.write(f"{s},{d},{t},{a}\n")


if __name__ == "__main__":
    DATA.mkdir(exist_ok=True)
    interactions()
    transactions()
