#!/usr/bin/env python3
"""Writes mini_corpus.jsonl: a small synthetic abstract corpus for demos and tests.

Each abstract mixes a few themes of economics vocabulary, carries publisher
boilerplate typical of its journal, and one record has an empty abstract.
Output is fully determined by SEED.
"""

import json
import random
from pathlib import Path

SEED = 20190601
N_DOCS = 300

THEMES = {
    "labor": "wage wages worker workers employment unemployment labor union unions hiring skill skills "
    "training job jobs tenure occupation earnings minimum displacement immigrant immigrants",
    "monetary": "inflation monetary interest rate rates central bank banks credit money liquidity "
    "expectations taylor rule output gap nominal price stickiness shock shocks",
    "trade": "trade tariff tariffs export exports import imports exporter firms globalization "
    "country countries exchange currency comparative advantage gravity barriers",
    "development": "poverty village villages household households microfinance loan loans "
    "rural farmers agricultural schooling health randomized intervention aid",
    "finance": "asset assets portfolio stock stocks return returns volatility risk premium "
    "investor investors hedge arbitrage pricing bond bonds",
    "industrial": "merger mergers competition entry incumbent monopoly oligopoly market "
    "markets pricing consumers demand supply antitrust platform innovation patent",
    "public": "tax taxes taxation transfer welfare redistribution government spending "
    "fiscal deficit debt public pension insurance subsidy",
    "theory": "game games player players strategy strategic equilibrium equilibria nash "
    "mechanism auction auctions bidder information signal contract",
}

FILLER = (
    "model evidence estimate estimates effect effects data analysis show find results "
    "policy theory empirical framework increase decrease large significant new approach"
).split()

JOURNALS = {
    "American Economic Review": "Copyright AEA. The American Economic Association is hosted by Vanderbilt University.",
    "Econometrica": "All rights reserved.",
    "Journal of Political Economy": "© {year} The University of Chicago. All rights reserved.",
    "Quarterly Journal of Economics": "© {year} by the President and Fellows of Harvard College and the Massachusetts Institute of Technology.",
    "Review of Economic Studies": "© The Author(s) {year}. Published by Oxford University Press on behalf of The Review of Economic Studies Limited.",
}

OPENERS = ["This paper studies", "In this paper we examine", "We study", "This article analyzes", "We propose"]


def dirichlet(rng, alpha, k):
    draws = [rng.gammavariate(alpha, 1.0) for _ in range(k)]
    total = sum(draws)
    return [d / total for d in draws]


def abstract(rng, weights):
    themes = list(THEMES.values())
    words = []
    for _ in range(rng.randint(60, 110)):
        if rng.random() < 0.15:
            words.append(rng.choice(FILLER))
        else:
            t = rng.choices(range(len(themes)), weights=weights)[0]
            words.append(rng.choice(themes[t].split()))
    sentences = []
    while words:
        n = rng.randint(8, 16)
        chunk, words = words[:n], words[n:]
        sentences.append(" ".join(chunk).capitalize() + ".")
    pct = f"{rng.uniform(0.5, 30.0):.1f} percent"
    return f"{rng.choice(OPENERS)} {sentences[0]} " + " ".join(sentences[1:]) + f" The effect is {pct}."


def main():
    rng = random.Random(SEED)
    journals = sorted(JOURNALS)
    blank = rng.randrange(N_DOCS)
    lines = []
    for i in range(N_DOCS):
        journal = journals[i % len(journals)]
        year = rng.randint(1990, 2019)
        weights = dirichlet(rng, 0.25, len(THEMES))
        text = "" if i == blank else abstract(rng, weights) + " " + JOURNALS[journal].format(year=year)
        lines.append(json.dumps({"id": f"doc{i:04d}", "abstract": text, "journal": journal, "year": year}))
    out = Path(__file__).with_name("mini_corpus.jsonl")
    out.write_text("\n".join(lines) + "\n", encoding="utf-8")


if __name__ == "__main__":
    main()
