#!/usr/bin/env python3
# Copyright 2026 The mgtscope Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Writes the 64-document synthetic fixture used by the CLI tests.

32 human documents and 8 documents from each of four generators. Traces and
embeddings are drawn so that both problems are separable:

  * human tokens have large ranks (geometric, p = 0.02) and low log-probs,
    machine tokens small ranks (geometric, p = 0.5) and high log-probs;
  * embeddings are tight clusters around well separated class centers.

Run from this directory:  python3 make_fixture.py
"""

import json
import math
import random

SEED = 20260415
GENERATORS = ["Gemma", "Llama3-8", "Qwen-7", "SOLAR"]
DIM = 16
WORDS = (
    "the city council voted on a new budget for schools and roads while residents "
    "gathered outside to discuss rising costs local markets reported strong sales "
    "despite weather warnings officials said the plan would improve transport and "
    "reduce delays across several districts next year"
).split()
TAGS = ["NOUN", "VERB", "ADJ", "DET", "ADP", "PRON", "ADV", "CCONJ"]


def geometric(rng, p):
    # Number of trials up to and including the first success.
    u = 1.0 - rng.random()
    return 1 + int(math.floor(math.log(u) / math.log(1.0 - p)))


def sentence(rng, lo, hi, end):
    n = rng.randint(lo, hi)
    words = [rng.choice(WORDS) for _ in range(n)]
    words[0] = words[0].capitalize()
    return " ".join(words) + end


def text_for(rng, human):
    if human:
        parts = [sentence(rng, 4, 16, rng.choice([".", ".", "!", "?"])) for _ in range(rng.randint(3, 6))]
    else:
        parts = [sentence(rng, 9, 11, ".") for _ in range(4)]
    return " ".join(parts)


def trace_for(rng, human, n_words):
    tokens = []
    for i in range(n_words + rng.randint(2, 6)):
        if human:
            rank = geometric(rng, 0.02)
            lp = -rng.uniform(2.5, 6.0)
            ent = rng.uniform(3.0, 5.0)
        else:
            rank = geometric(rng, 0.5)
            lp = -rng.uniform(0.05, 1.2)
            ent = rng.uniform(0.8, 2.0)
        tokens.append({
            "t": "w%d" % i,
            "lp": round(lp, 6),
            "rank": rank,
            "ent": round(ent, 6),
            "elp": round(-ent, 6),
            "vlp": round(rng.uniform(0.5, 2.0), 6),
        })
    return tokens


def main():
    rng = random.Random(SEED)
    classes = [("human", None, 32)] + [("machine", g, 8) for g in GENERATORS]
    centers = {}
    for label, gen, _ in classes:
        v = [rng.gauss(0.0, 1.0) for _ in range(DIM)]
        norm = math.sqrt(sum(x * x for x in v))
        centers[gen] = [3.0 * x / norm for x in v]

    docs, tags, traces, embeddings = [], [], [], []
    for label, gen, count in classes:
        # 60 / 20 / 20 split per class.
        n_test = count // 5 + (1 if count == 32 else 0)
        n_val = n_test
        for k in range(count):
            split = "test" if k < n_test else ("val" if k < n_test + n_val else "train")
            doc_id = "%s-%02d" % ("h" if gen is None else gen.lower().replace("-", ""), k)
            text = text_for(rng, gen is None)
            n_words = len(text.split())
            docs.append({
                "doc_id": doc_id,
                "text": text,
                "headline": "Council budget story %d" % k,
                "label": label,
                "generator": gen,
                "domain": "news",
                "split": split,
                "task": "E0",
            })
            tags.append({"doc_id": doc_id, "tags": [rng.choice(TAGS) for _ in range(n_words)]})
            traces.append({"doc_id": doc_id, "tokens": trace_for(rng, gen is None, n_words)})
            tok = [[round(c + rng.gauss(0.0, 0.3), 6) for c in centers[gen]] for _ in range(3)]
            vec = [round(sum(t[j] for t in tok) / 3.0, 9) for j in range(DIM)]
            embeddings.append({"doc_id": doc_id, "vec": vec, "tok_vecs": tok})

    humans = [d["doc_id"] for d in docs if d["generator"] is None]
    machines = [d["doc_id"] for d in docs if d["generator"] is not None]
    pairs = [{"machine_doc_id": m, "human_doc_id": humans[i]} for i, m in enumerate(machines)]

    def dump(name, rows):
        with open(name, "w", encoding="utf-8", newline="\n") as f:
            for r in rows:
                f.write(json.dumps(r, ensure_ascii=False) + "\n")

    dump("corpus.jsonl", docs)
    dump("tags.jsonl", tags)
    dump("traces.jsonl", traces)
    dump("embeddings.jsonl", embeddings)
    dump("pairs.jsonl", pairs)


if __name__ == "__main__":
    main()
