#!/usr/bin/env python3
"""Independent recount of the bundled sample log golden values."""
import csv
import sys
from collections import defaultdict

SOCIAL = {
    "twitter.com": "Twitter", "x.com": "Twitter",
    "facebook.com": "Facebook", "fb.com": "Facebook", "fb.me": "Facebook",
    "instagram.com": "Instagram", "instagr.am": "Instagram",
    "google.com": "Google",
    "youtube.com": "Youtube", "youtu.be": "Youtube",
}
MAINSTREAM = {"nytimes.com", "reuters.com", "wsj.com", "nbcnews.com", "ft.com"}


def host(url):
    rest = url.split("://", 1)[-1]
    for sep in "/?#":
        rest = rest.split(sep, 1)[0]
    return rest.lower()


def categorize(url):
    h = host(url)
    for dom, plat in SOCIAL.items():
        if h == dom or h.endswith("." + dom):
            return plat
    for dom in MAINSTREAM:
        if h == dom or h.endswith("." + dom):
            return "Mainstream"
    return "Alternatives"


def main(path):
    rows = list(csv.DictReader(open(path)))
    print("records:", len(rows))
    cascades = sorted({r["cascade_id"] for r in rows})
    print("cascades:", len(cascades), cascades)

    by_id = {r["record_id"]: r for r in rows}
    pairs, kept, dangling = [], {}, 0
    for r in rows:
        ref = r["retweet_of"]
        if not ref:
            continue
        if ref not in by_id:
            dangling += 1
            continue
        o = by_id[ref]
        key = (r["user_id"], ref)
        pair = dict(cascade=r["cascade_id"], src=categorize(o["url"]),
                    ts=int(r["timestamp"]), group=r["label"])
        if key not in kept:
            kept[key] = len(pairs)
            pairs.append(pair)
        elif pair["ts"] < pairs[kept[key]]["ts"]:
            pairs[kept[key]] = pair
    print("pairs:", len(pairs), "dangling:", dangling)
    for g in ("psm", "normal"):
        print(g, "pairs:", sum(1 for p in pairs if p["group"] == g))

    for g in ("psm", "normal"):
        print(f"--- sequences {g}")
        by_c = defaultdict(list)
        for p in pairs:
            if p["group"] == g:
                by_c[p["cascade"]].append(p)
        for c in sorted(by_c):
            ps = sorted(by_c[c], key=lambda p: p["ts"])
            t0 = ps[0]["ts"]
            T = max(ps[-1]["ts"] - t0, 1)
            print(c, "n=", len(ps), "T=", T,
                  [(p["ts"] - t0, p["src"]) for p in ps])

    print("--- cascade stats")
    acc = defaultdict(lambda: dict(n=0, mn=1 << 62, mx=0, susp=set()))
    for r in rows:
        a = acc[r["cascade_id"]]
        a["n"] += 1
        ts = int(r["timestamp"])
        a["mn"], a["mx"] = min(a["mn"], ts), max(a["mx"], ts)
        if r["label"] == "psm":
            a["susp"].add(r["user_id"])
    for c in sorted(acc):
        a = acc[c]
        print(c, "size", a["n"], "duration", a["mx"] - a["mn"],
              "suspended", len(a["susp"]))

    daily = defaultdict(lambda: [0, 0])
    for p in pairs:
        daily[p["ts"] // 86400][0 if p["group"] == "psm" else 1] += 1
    for day in sorted(daily):
        print("day", day, "psm", daily[day][0], "normal", daily[day][1])


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "data/sample_events.csv")
