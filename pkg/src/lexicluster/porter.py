"""Porter's suffix-stripping stemmer (the original 1980 algorithm).

Implements the five-step rule cascade exactly as published, without the
short-word guard or the extra rules that later distributions added.
Input is expected to be a lowercase ASCII word; anything else is
returned with whatever rules happen to fire.
"""

from __future__ import annotations

__all__ = ["stem"]


def _is_consonant(word: str, i: int) -> bool:
    c = word[i]
    if c in "aeiou":
        return False
    if c == "y":
        # y is a vowel when preceded by a consonant
        return i == 0 or not _is_consonant(word, i - 1)
    return True


def _measure(stem_: str) -> int:
    """Number of vowel->consonant transitions: the m of [C](VC)^m[V]."""
    m = 0
    in_vowel_run = False
    for i in range(len(stem_)):
        if _is_consonant(stem_, i):
            if in_vowel_run:
                m += 1
            in_vowel_run = False
        else:
            in_vowel_run = True
    return m


def _has_vowel(stem_: str) -> bool:
    return any(not _is_consonant(stem_, i) for i in range(len(stem_)))


def _ends_double_consonant(stem_: str) -> bool:
    return (
        len(stem_) >= 2
        and stem_[-1] == stem_[-2]
        and _is_consonant(stem_, len(stem_) - 1)
    )


def _ends_cvc(stem_: str) -> bool:
    """The *o condition: ends consonant-vowel-consonant, last not w/x/y."""
    if len(stem_) < 3:
        return False
    n = len(stem_)
    return (
        _is_consonant(stem_, n - 3)
        and not _is_consonant(stem_, n - 2)
        and _is_consonant(stem_, n - 1)
        and stem_[-1] not in "wxy"
    )


def _step1a(w: str) -> str:
    if w.endswith("sses"):
        return w[:-2]
    if w.endswith("ies"):
        return w[:-2]
    if w.endswith("ss"):
        return w
    if w.endswith("s"):
        return w[:-1]
    return w


def _step1b_cleanup(w: str) -> str:
    # Applied only after an -ed or -ing removal.
    if w.endswith(("at", "bl", "iz")):
        return w + "e"
    if _ends_double_consonant(w) and w[-1] not in "lsz":
        return w[:-1]
    if _measure(w) == 1 and _ends_cvc(w):
        return w + "e"
    return w


def _step1b(w: str) -> str:
    if w.endswith("eed"):
        if _measure(w[:-3]) > 0:
            return w[:-1]
        return w
    if w.endswith("ed"):
        if _has_vowel(w[:-2]):
            return _step1b_cleanup(w[:-2])
        return w
    if w.endswith("ing"):
        if _has_vowel(w[:-3]):
            return _step1b_cleanup(w[:-3])
        return w
    return w


def _step1c(w: str) -> str:
    if w.endswith("y") and _has_vowel(w[:-1]):
        return w[:-1] + "i"
    return w


_STEP2_RULES = (
    ("ational", "ate"),
    ("tional", "tion"),
    ("enci", "ence"),
    ("anci", "ance"),
    ("izer", "ize"),
    ("abli", "able"),
    ("alli", "al"),
    ("entli", "ent"),
    ("eli", "e"),
    ("ousli", "ous"),
    ("ization", "ize"),
    ("ation", "ate"),
    ("ator", "ate"),
    ("alism", "al"),
    ("iveness", "ive"),
    ("fulness", "ful"),
    ("ousness", "ous"),
    ("aliti", "al"),
    ("iviti", "ive"),
    ("biliti", "ble"),
)

_STEP3_RULES = (
    ("icate", "ic"),
    ("ative", ""),
    ("alize", "al"),
    ("iciti", "ic"),
    ("ical", "ic"),
    ("ful", ""),
    ("ness", ""),
)

_STEP4_SUFFIXES = (
    "al", "ance", "ence", "er", "ic", "able", "ible", "ant", "ement",
    "ment", "ent", "ion", "ou", "ism", "ate", "iti", "ous", "ive", "ize",
)


def _longest_match(w: str, suffixes) -> str | None:
    best = None
    for sfx in suffixes:
        if w.endswith(sfx) and (best is None or len(sfx) > len(best)):
            best = sfx
    return best


def _apply_replacement_step(w: str, rules) -> str:
    # Longest matching suffix is selected first; its (m > 0) condition is
    # then tested once. A failed condition does not fall through to
    # shorter suffixes.
    match = _longest_match(w, [sfx for sfx, _ in rules])
    if match is None:
        return w
    stem_ = w[: len(w) - len(match)]
    if _measure(stem_) > 0:
        return stem_ + dict(rules)[match]
    return w


def _step2(w: str) -> str:
    return _apply_replacement_step(w, _STEP2_RULES)


def _step3(w: str) -> str:
    return _apply_replacement_step(w, _STEP3_RULES)


def _step4(w: str) -> str:
    match = _longest_match(w, _STEP4_SUFFIXES)
    if match is None:
        return w
    stem_ = w[: len(w) - len(match)]
    if _measure(stem_) <= 1:
        return w
    if match == "ion" and not stem_.endswith(("s", "t")):
        return w
    return stem_


def _step5a(w: str) -> str:
    if w.endswith("e"):
        stem_ = w[:-1]
        m = _measure(stem_)
        if m > 1 or (m == 1 and not _ends_cvc(stem_)):
            return stem_
    return w


def _step5b(w: str) -> str:
    if w.endswith("ll") and _measure(w) > 1:
        return w[:-1]
    return w


def stem(word: str) -> str:
    """Reduce a lowercase word to its Porter stem."""
    if not word:
        return word
    w = _step1a(word)
    w = _step1b(w)
    w = _step1c(w)
    w = _step2(w)
    w = _step3(w)
    w = _step4(w)
    w = _step5a(w)
    w = _step5b(w)
    return w
