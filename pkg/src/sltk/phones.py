"""Phoneme inventory and articulatory attributes.

The default inventory is the 34-symbol Romanian set used by the shipped
corpus statistics (``pau`` and ``sp`` are the long/short silence symbols).
Both the inventory and the articulatory table can be overridden per corpus.
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class Articulation:
    kind: str    # vowel | semivowel | consonant | silence
    place: str
    manner: str
    voiced: bool


# phoneme -> (kind, place, manner, voiced)
_ART = {
    "@":   ("vowel", "central", "mid", True),
    "a":   ("vowel", "central", "open", True),
    "a@":  ("vowel", "central", "close", True),
    "e":   ("vowel", "front", "mid", True),
    "e@":  ("vowel", "front", "diph", True),
    "i":   ("vowel", "front", "close", True),
    "o":   ("vowel", "back", "mid", True),
    "o@":  ("vowel", "back", "diph", True),
    "u":   ("vowel", "back", "close", True),
    "ij":  ("semivowel", "palatal", "glide", True),
    "j":   ("semivowel", "palatal", "glide", True),
    "w":   ("semivowel", "labiovelar", "glide", True),
    "b":   ("consonant", "bilabial", "stop", True),
    "p":   ("consonant", "bilabial", "stop", False),
    "d":   ("consonant", "alveolar", "stop", True),
    "t":   ("consonant", "alveolar", "stop", False),
    "g":   ("consonant", "velar", "stop", True),
    "k":   ("consonant", "velar", "stop", False),
    "ch":  ("consonant", "postalveolar", "affricate", False),
    "dz":  ("consonant", "postalveolar", "affricate", True),
    "ts":  ("consonant", "alveolar", "affricate", False),
    "f":   ("consonant", "labiodental", "fricative", False),
    "v":   ("consonant", "labiodental", "fricative", True),
    "s":   ("consonant", "alveolar", "fricative", False),
    "z":   ("consonant", "alveolar", "fricative", True),
    "sh":  ("consonant", "postalveolar", "fricative", False),
    "zh":  ("consonant", "postalveolar", "fricative", True),
    "h":   ("consonant", "glottal", "fricative", False),
    "m":   ("consonant", "bilabial", "nasal", True),
    "n":   ("consonant", "alveolar", "nasal", True),
    "l":   ("consonant", "alveolar", "lateral", True),
    "r":   ("consonant", "alveolar", "trill", True),
    "pau": ("silence", "x", "x", False),
    "sp":  ("silence", "x", "x", False),
}

DEFAULT_INVENTORY: frozenset[str] = frozenset(_ART)

DEFAULT_ARTICULATION: dict[str, Articulation] = {
    p: Articulation(*attrs) for p, attrs in _ART.items()
}

SILENCE_PHONES = frozenset({"pau", "sp"})

# context sentinel for positions beyond the utterance boundary
BOUNDARY_PHONE = "x"
BOUNDARY_ARTICULATION = Articulation("x", "x", "x", False)


def articulation(phoneme: str) -> Articulation:
    if phoneme == BOUNDARY_PHONE:
        return BOUNDARY_ARTICULATION
    return DEFAULT_ARTICULATION[phoneme]
