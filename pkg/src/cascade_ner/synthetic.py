"""Deterministic synthetic corpus with four separable entity types.

Rules: application names are CamelCase pseudo-words ending in ``Lab``
(optionally followed by ``Studio``/``Suite``); plug-ins are lowercase
pseudo-words ending in ``kit``; programming environments come from a fixed
list. The role is fixed by the template: "developed"/"present" mark
Creation, everything else Usage. Negative sentences reuse the same verbs
with lowercase common nouns.
"""

from __future__ import annotations

import random

from .corpus import Corpus

SYNTHETIC_TYPES = (
    "Application_Usage",
    "Application_Creation",
    "PlugIn_Usage",
    "ProgrammingEnvironment_Usage",
)

_ONSETS = ("b", "d", "f", "g", "k", "m", "n", "p", "r", "s", "t", "v", "z", "br", "st", "tr")
_VOWELS = ("a", "e", "i", "o", "u")
_LANGUAGES = ("Python", "Julia", "MATLAB", "Perl", "Octave", "Fortran")
_NOUNS = ("model", "survey", "sample", "method", "protocol", "dataset", "procedure",
          "questionnaire", "test", "regression", "scale", "analysis")
_OBJECTS = ("the data", "all samples", "the images", "the transcripts", "the responses")

# (template, slot types); "{0}" / "{1}" mark entity slots.
_TEMPLATES = (
    ("All statistical analyses were performed using {0} .", ("Application_Usage",)),
    ("We analysed {x} with {0} .", ("Application_Usage",)),
    ("Images were processed in {0} and plotted with the {1} package .",
     ("Application_Usage", "PlugIn_Usage")),
    ("We developed {0} to annotate {x} .", ("Application_Creation",)),
    ("Here we present {0} , a new tool .", ("Application_Creation",)),
    ("Models were fitted using the {0} package .", ("PlugIn_Usage",)),
    ("The {0} library was used to compute {x} .", ("PlugIn_Usage",)),
    ("Scripts were written in {0} .", ("ProgrammingEnvironment_Usage",)),
    ("Simulations were implemented in {0} using {1} .",
     ("ProgrammingEnvironment_Usage", "PlugIn_Usage")),
    ("We developed {0} in {1} .", ("Application_Creation", "ProgrammingEnvironment_Usage")),
)
_NEGATIVES = (
    "All statistical analyses were performed using a {n} .",
    "We analysed {x} with a {n} .",
    "We developed a {n} to annotate {x} .",
    "Participants completed the {n} twice .",
    "The {n} was validated in a previous study .",
    "Results are summarised in the appendix .",
    "The {n} was used to compute {x} .",
    "Data were collected between 2015 and 2018 .",
)


def _word(rng: random.Random, syllables: int) -> str:
    return "".join(rng.choice(_ONSETS) + rng.choice(_VOWELS) for _ in range(syllables))


def _entity(rng: random.Random, etype: str) -> list[str]:
    if etype.startswith("Application"):
        words = [_word(rng, rng.randint(1, 2)).capitalize() + "Lab"]
        if rng.random() < 0.3:
            words.append(rng.choice(("Studio", "Suite")))
        return words
    if etype.startswith("PlugIn"):
        return [_word(rng, rng.randint(1, 2)) + "kit"]
    return [rng.choice(_LANGUAGES)]


def _fill(rng, text):
    return text.replace("{x}", rng.choice(_OBJECTS)).replace("{n}", rng.choice(_NOUNS))


def synthetic_corpus(n_sentences: int = 400, entity_rate: float = 0.5, seed: int = 0) -> Corpus:
    rng = random.Random(seed)
    rows = []
    for _ in range(n_sentences):
        if rng.random() < entity_rate:
            template, slots = rng.choice(_TEMPLATES)
            words, tags = [], []
            for piece in _fill(rng, template).split(" "):
                if piece in ("{0}", "{1}"):
                    etype = slots[int(piece[1])]
                    ent = _entity(rng, etype)
                    words += ent
                    tags += [f"B-{etype}"] + [f"I-{etype}"] * (len(ent) - 1)
                else:
                    words.append(piece)
                    tags.append("O")
        else:
            words = _fill(rng, rng.choice(_NEGATIVES)).split(" ")
            tags = ["O"] * len(words)
        rows.append((words, tags))
    return Corpus.from_lists(rows)


def train_test_split_corpus(corpus: Corpus, train_fraction: float = 0.8) -> tuple[Corpus, Corpus]:
    cut = int(len(corpus) * train_fraction)
    return Corpus(corpus.sentences[:cut]), Corpus(corpus.sentences[cut:])
