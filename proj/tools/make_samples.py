#!/usr/bin/env python3
"""Regenerates the sample files in data/samples.

Output is fully determined by the seed, so rerunning this script leaves the
committed files unchanged.
"""

import argparse
import json
import random
from pathlib import Path

ENGINES = ["bing", "duckduckgo", "google"]
QUERIES = {
    "steven wilson": "music",
    "climate summit": "news",
    "sourdough starter": "food",
    "mars rover": "science",
    "marathon training": "sports",
}
VOCAB = [
    "official", "website", "latest", "guide", "review", "video", "photos", "news", "history",
    "report", "update", "interview", "album", "tour", "tips", "recipe", "mission", "data",
    "plan", "schedule", "results", "analysis", "beginners", "complete", "live", "archive",
]
LIST_LENGTH = 10


def sentence(rng, words):
    return " ".join(rng.choice(VOCAB) for _ in range(words))


def slug(query):
    return query.replace(" ", "-")


def make_pool(rng, query, size):
    pool = []
    for i in range(size):
        host = rng.choice(["example.org", "example.com", "news.example.net", "wiki.example.org"])
        url = f"https://{host}/{slug(query)}/{i}"
        pool.append({"url": url, "title": sentence(rng, 4), "snippet": sentence(rng, 12)})
    return pool


def make_list(rng, pool, engine):
    # Each engine favours a different slice of the pool, so lists overlap partially.
    offset = ENGINES.index(engine) * 2
    weights = [1.0 / (1 + abs(i - offset)) for i in range(len(pool))]
    chosen = []
    candidates = list(range(len(pool)))
    while len(chosen) < LIST_LENGTH:
        pick = rng.choices(candidates, weights=[weights[c] for c in candidates])[0]
        candidates.remove(pick)
        chosen.append(pick)
    results = []
    for rank, idx in enumerate(chosen, start=1):
        item = dict(pool[idx])
        if rng.random() < 0.3:
            item["snippet"] = sentence(rng, 12)
        if rng.random() < 0.05:
            item["title"] = sentence(rng, 4)
        results.append({"rank": rank, **item})
    return results


def record(engine, query, date, results):
    return {
        "category": QUERIES.get(query, "general"),
        "date": date,
        "engine": engine,
        "query": query,
        "results": [{"rank": r["rank"], "snippet": r["snippet"], "title": r["title"], "url": r["url"]}
                    for r in results],
    }


def write_jsonl(path, records):
    records = sorted(records, key=lambda r: (r["engine"], r["query"], r["date"]))
    with open(path, "w", encoding="utf-8", newline="\n") as out:
        for r in records:
            out.write(json.dumps(r, ensure_ascii=False, separators=(",", ":"), sort_keys=True) + "\n")


def period(rng, queries, dates, pool_size):
    records = []
    for query in queries:
        pool = make_pool(rng, query, pool_size)
        for date in dates:
            for engine in ENGINES:
                records.append(record(engine, query, date, make_list(rng, pool, engine)))
    return records


def pair_fixtures(out_dir):
    def fixture(engine, ids, content):
        results = [{"rank": i + 1, "url": f"https://example.org/{x}", **content(x)} for i, x in enumerate(ids)]
        return [record(engine, "comparison", "2019-05-01", results)]

    same = lambda x: {"title": f"title {x}word", "snippet": f"snippet about {x}topic"}  # noqa: E731
    other = lambda x: {"title": f"heading {x}other", "snippet": f"summary {x}other"}  # noqa: E731
    write_jsonl(out_dir / "pair_left.jsonl", fixture("left", "abcdef", same))
    write_jsonl(out_dir / "pair_right_identical.jsonl", fixture("right", "aghijk", same))
    write_jsonl(out_dir / "pair_right_different.jsonl", fixture("right", "aghijk", other))


def import_fixtures(out_dir):
    mapping = {
        "engine": "/source", "query": "/request/q", "date": "/day", "date_format": "compact",
        "category": {"const": "music"}, "results": "/hits", "url": "/link", "title": "/name",
        "snippet": "/text", "rank": "/position",
    }
    (out_dir / "import_mapping.json").write_text(json.dumps(mapping, indent=2) + "\n", encoding="utf-8")
    foreign = [
        {"source": "bing", "request": {"q": "steven wilson"}, "day": "20190501",
         "hits": [{"position": 1, "link": "https://stevenwilsonhq.example/", "name": "Steven Wilson",
                   "text": "Official website"},
                  {"position": 2, "link": "https://wiki.example.org/Steven_Wilson", "name": "Steven Wilson - Wiki",
                   "text": "English musician and producer"}]},
        {"source": "google", "request": {"q": "steven wilson"}, "day": "20190501",
         "hits": [{"position": 1, "link": "https://wiki.example.org/Steven_Wilson", "name": "Steven Wilson - Wiki",
                   "text": "English musician, singer and producer"},
                  {"position": 2, "link": "https://stevenwilsonhq.example/", "name": "Steven Wilson",
                   "text": "Official website"}]},
    ]
    with open(out_dir / "foreign.jsonl", "w", encoding="utf-8", newline="\n") as out:
        for f in foreign:
            out.write(json.dumps(f, sort_keys=True) + "\n")


def url_fixtures(out_dir):
    urls = [
        "HTTP://Example.COM:80/a/./b/#top",
        "https://example.com/%7Euser/docs/",
        "https://wiki.example.org/Perth",
        "http://short.example/x",
        "https://example.com/search?",
    ]
    (out_dir / "urls.txt").write_text("\n".join(urls) + "\n", encoding="utf-8")
    (out_dir / "redirects.tsv").write_text(
        "http://short.example/x\thttps://example.com/landing\n"
        "https://wiki.example.org/Perth\thttps://wiki.example.org/Perth,_Western_Australia\n",
        encoding="utf-8")


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", type=Path, default=Path(__file__).resolve().parent.parent / "data" / "samples")
    parser.add_argument("--seed", type=int, default=2019)
    args = parser.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)

    rng = random.Random(args.seed)
    write_jsonl(args.out / "serp_2019.jsonl",
                period(rng, list(QUERIES), ["2019-05-01", "2019-05-02", "2019-05-03"], 16))
    earlier = list(QUERIES)[:4] + ["world cup"]
    write_jsonl(args.out / "serp_2016.jsonl", period(rng, earlier, ["2016-03-01", "2016-03-02"], 16))
    pair_fixtures(args.out)
    import_fixtures(args.out)
    url_fixtures(args.out)


if __name__ == "__main__":
    main()
