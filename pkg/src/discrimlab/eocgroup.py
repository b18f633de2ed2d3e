"""Extensions of centralizers over a free base group.

G' = F *_<u> (<u> x Z^n), iterated over several stages whose amalgamating
elements u all lie in the base free group and are pairwise
non-commensurable.  Elements are kept in a canonical alternating syllable
form, which decides the word problem: two words represent the same
element iff they normalize to the same syllable sequence.

Syllables:
  * base syllable: a reduced word of the free base group;
  * abelian syllable of stage j: u_j^e * t_1^(v_1) ... t_n^(v_n) with
    v != 0 (a pure u-power is base material and is never stored here).

Canonical form:
  * adjacent syllables are unmergeable (alternation);
  * every base syllable is the minimal representative of its double
    coset with respect to the u's of its abelian neighbors, with the
    stripped u-powers folded into the neighbors' e-exponents (fixed
    tie-break: minimal length, then smallest |s|, then |t|).

Element serialization extends the base word format with ``t<stage>.<i>``
and ``T<stage>.<i>`` tokens, stages and indices 1-based.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence, Union

from .errors import BudgetExceeded, GroupSpecError, WordFormatError
from .freewords import Alphabet, Word, parse_word, power_membership, _strip_search

DEFAULT_BALL_CAP = 500_000

_T_TOKEN_RE = re.compile(r"([tT])([0-9]+)\.([0-9]+)$")
_G_TOKEN_RE = re.compile(r"([gG])([0-9]+)$")

# token model: base letters are signed ints as in freewords; t-letters are
# triples ('t', stage_index0, signed generator index)
Token = Union[int, tuple]


@dataclass(frozen=True)
class EocStage:
    u: Word
    rank: int


@dataclass(frozen=True)
class BaseSyllable:
    word: Word


@dataclass(frozen=True)
class AbelianSyllable:
    stage: int  # 0-based
    u_exp: int
    t_exps: tuple[int, ...]  # never all zero in normal position


Syllable = Union[BaseSyllable, AbelianSyllable]


class EocElement:
    """An element of an extension-of-centralizer group in canonical form."""

    __slots__ = ("group", "syllables", "_hash")

    def __init__(self, group: "EocGroup", syllables: tuple[Syllable, ...]):
        self.group = group
        self.syllables = syllables
        self._hash = hash(syllables)

    def is_trivial(self) -> bool:
        return not self.syllables

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, EocElement)
            and self.group is other.group
            and self.syllables == other.syllables
        )

    def __hash__(self) -> int:
        return self._hash

    def __mul__(self, other: "EocElement") -> "EocElement":
        if self.group is not other.group:
            raise ValueError("elements of different groups")
        return self.group._from_syllables(self.syllables + other.syllables)

    def inverse(self) -> "EocElement":
        inv: list[Syllable] = []
        for syl in reversed(self.syllables):
            if isinstance(syl, BaseSyllable):
                inv.append(BaseSyllable(syl.word.inverse()))
            else:
                inv.append(
                    AbelianSyllable(
                        syl.stage, -syl.u_exp, tuple(-v for v in syl.t_exps)
                    )
                )
        return self.group._from_syllables(tuple(inv))

    def tokens(self) -> str:
        parts = []
        for syl in self.syllables:
            if isinstance(syl, BaseSyllable):
                if syl.word.letters:
                    parts.append(syl.word.tokens())
            else:
                u = self.group.stages[syl.stage].u
                if syl.u_exp:
                    parts.append((u ** syl.u_exp).tokens())
                for i, v in enumerate(syl.t_exps, start=1):
                    if v > 0:
                        parts.extend([f"t{syl.stage + 1}.{i}"] * v)
                    elif v < 0:
                        parts.extend([f"T{syl.stage + 1}.{i}"] * (-v))
        return " ".join(parts)

    def __repr__(self) -> str:
        return f"EocElement({self.tokens()!r})"


class EocGroup:
    """Handle for G' = F *_<u_1> (<u_1> x Z^(n_1)) *_<u_2> ... over F = F_rank.

    Immutable after construction; all operations are pure.  Ball layers
    and double-coset strips are memoized on the handle.
    """

    def __init__(self, alphabet: Alphabet, stages: Sequence[tuple[Word, int]]):
        self.alphabet = alphabet
        validated = []
        for j, (u, rank) in enumerate(stages):
            if u.alphabet != alphabet:
                raise GroupSpecError("u over a different alphabet", stage=j)
            if u.is_identity():
                raise GroupSpecError("u must be nontrivial", stage=j)
            root, exp = u.root()
            if exp > 1:
                raise GroupSpecError(
                    f"u is a proper power ({root.tokens()!r})^{exp}", stage=j
                )
            if rank < 1:
                raise GroupSpecError("extension rank must be >= 1", stage=j)
            validated.append(EocStage(u, rank))
        for j in range(len(validated)):
            for i in range(j):
                ui, uj = validated[i].u, validated[j].u
                if ui == uj or ui == uj.inverse():
                    raise GroupSpecError(
                        f"u commensurable with stage {i}'s u", stage=j
                    )
        self.stages: tuple[EocStage, ...] = tuple(validated)
        self._strip_cache: dict = {}
        self._membership_cache: dict = {}
        # ball cache: layers[r] = list of elements of word length exactly r
        self._layers: list[list[EocElement]] = [[self.identity()]]
        self._lengths: dict[EocElement, int] = {self.identity(): 0}

    # -- construction helpers -------------------------------------------------

    def identity(self) -> EocElement:
        return EocElement(self, ())

    def generator_tokens(self) -> list[Token]:
        """Generating set in the fixed deterministic order used by ball BFS."""
        toks: list[Token] = []
        toks.extend(range(1, self.alphabet.rank + 1))
        toks.extend(-i for i in range(1, self.alphabet.rank + 1))
        for j, stage in enumerate(self.stages):
            toks.extend(("t", j, i) for i in range(1, stage.rank + 1))
            toks.extend(("t", j, -i) for i in range(1, stage.rank + 1))
        return toks

    def parse_tokens(self, text: str) -> list[Token]:
        tokens: list[Token] = []
        pos = 0
        for chunk in text.split():
            pos = text.index(chunk, pos)
            m = _G_TOKEN_RE.match(chunk)
            if m:
                idx = int(m.group(2))
                if not 1 <= idx <= self.alphabet.rank:
                    raise WordFormatError(
                        f"generator index {idx} out of range", pos
                    )
                tokens.append(idx if m.group(1) == "g" else -idx)
            else:
                m = _T_TOKEN_RE.match(chunk)
                if not m:
                    raise WordFormatError(f"malformed token {chunk!r}", pos)
                stage = int(m.group(2)) - 1
                idx = int(m.group(3))
                if not 0 <= stage < len(self.stages):
                    raise WordFormatError(f"unknown stage {stage + 1}", pos)
                if not 1 <= idx <= self.stages[stage].rank:
                    raise WordFormatError(
                        f"t-index {idx} out of range for stage {stage + 1}", pos
                    )
                tokens.append(("t", stage, idx if m.group(1) == "t" else -idx))
            pos += len(chunk)
        return tokens

    def element(self, tokens: Union[str, Iterable[Token]]) -> EocElement:
        """Normalize a raw token sequence (or serialized string) to canonical form."""
        if isinstance(tokens, str):
            tokens = self.parse_tokens(tokens)
        syllables: list[Syllable] = []
        for tok in tokens:
            if isinstance(tok, int):
                syllables.append(BaseSyllable(Word(self.alphabet, (tok,))))
            else:
                _, stage, idx = tok
                v = [0] * self.stages[stage].rank
                v[abs(idx) - 1] = 1 if idx > 0 else -1
                syllables.append(AbelianSyllable(stage, 0, tuple(v)))
        return self._from_syllables(tuple(syllables))

    def base_element(self, w: Word) -> EocElement:
        return self._from_syllables((BaseSyllable(w),))

    def abelian_element(self, stage: int, u_exp: int, t_exps: Sequence[int]) -> EocElement:
        if len(t_exps) != self.stages[stage].rank:
            raise ValueError("t-exponent vector has wrong length")
        return self._from_syllables(
            (AbelianSyllable(stage, u_exp, tuple(t_exps)),)
        )

    # -- normalization --------------------------------------------------------

    def _power_of(self, stage: int, g: Word) -> Optional[int]:
        key = (stage, g.letters)
        if key not in self._membership_cache:
            self._membership_cache[key] = power_membership(self.stages[stage].u, g)
        return self._membership_cache[key]

    def _strip(
        self, g: Word, left_stage: Optional[int], right_stage: Optional[int]
    ) -> tuple[int, Word, int]:
        key = (g.letters, left_stage, right_stage)
        if key not in self._strip_cache:
            u_left = self.stages[left_stage].u if left_stage is not None else None
            u_right = self.stages[right_stage].u if right_stage is not None else None
            self._strip_cache[key] = _strip_search(g, u_left, u_right)
        return self._strip_cache[key]

    def _push(self, stack: list[Syllable], syl: Syllable) -> None:
        """Push one syllable, merging with the stack top until stable."""
        while True:
            if isinstance(syl, BaseSyllable) and syl.word.is_identity():
                return
            if isinstance(syl, AbelianSyllable) and not any(syl.t_exps):
                # degenerate: pure u-power, route to the base side
                syl = BaseSyllable(self.stages[syl.stage].u ** syl.u_exp)
                continue
            if not stack:
                stack.append(syl)
                return
            top = stack[-1]
            if isinstance(top, BaseSyllable) and isinstance(syl, BaseSyllable):
                stack.pop()
                syl = BaseSyllable(top.word * syl.word)
                continue
            if isinstance(top, AbelianSyllable) and isinstance(syl, AbelianSyllable):
                if top.stage == syl.stage:
                    stack.pop()
                    syl = AbelianSyllable(
                        top.stage,
                        top.u_exp + syl.u_exp,
                        tuple(a + b for a, b in zip(top.t_exps, syl.t_exps)),
                    )
                    continue
                stack.append(syl)
                return
            if isinstance(top, AbelianSyllable) and isinstance(syl, BaseSyllable):
                k = self._power_of(top.stage, syl.word)
                if k is not None:
                    stack.pop()
                    syl = AbelianSyllable(top.stage, top.u_exp + k, top.t_exps)
                    continue
                stack.append(syl)
                return
            # top is base, syl is abelian: absorb top into syl if it is a u-power
            k = self._power_of(syl.stage, top.word)
            if k is not None:
                stack.pop()
                syl = AbelianSyllable(syl.stage, syl.u_exp + k, syl.t_exps)
                continue
            stack.append(syl)
            return

    def _from_syllables(self, raw: tuple[Syllable, ...]) -> EocElement:
        # structural pass: alternation, pinches, u-power absorption
        stack: list[Syllable] = []
        for syl in raw:
            self._push(stack, syl)
        # canonical pass: strip base syllables against their abelian neighbors
        out: list[Syllable] = list(stack)
        i = 0
        while i < len(out):
            syl = out[i]
            if not isinstance(syl, BaseSyllable):
                i += 1
                continue
            left = out[i - 1] if i > 0 else None
            right = out[i + 1] if i + 1 < len(out) else None
            ls = left.stage if isinstance(left, AbelianSyllable) else None
            rs = right.stage if isinstance(right, AbelianSyllable) else None
            if ls is None and rs is None:
                i += 1
                continue
            s, h, t = self._strip(syl.word, ls, rs)
            if s and ls is not None:
                out[i - 1] = AbelianSyllable(ls, left.u_exp + s, left.t_exps)
            if t and rs is not None:
                out[i + 1] = AbelianSyllable(rs, right.u_exp + t, right.t_exps)
            if h.is_identity():
                # only possible between abelian neighbors of distinct stages
                del out[i]
            else:
                out[i] = BaseSyllable(h)
                i += 1
        return EocElement(self, tuple(out))

    # -- word problem and ball enumeration ------------------------------------

    def is_trivial(self, w: EocElement) -> bool:
        return w.is_trivial()

    def _grow_layer(self, cap: int) -> None:
        gens = self.generator_tokens()
        frontier = self._layers[-1]
        depth = len(self._layers)
        new: list[EocElement] = []
        for elem in frontier:
            for tok in gens:
                cand = elem * self.element([tok])
                if cand not in self._lengths:
                    self._lengths[cand] = depth
                    new.append(cand)
        if len(self._lengths) > cap:
            raise BudgetExceeded(
                f"ball enumeration exceeded cap of {cap} elements at radius {depth}"
            )
        self._layers.append(new)

    def ball(self, radius: int, cap: int = DEFAULT_BALL_CAP) -> list[EocElement]:
        """All elements of word length <= radius, BFS layer order, deduplicated."""
        if radius < 0:
            raise ValueError("radius must be nonnegative")
        while len(self._layers) <= radius:
            self._grow_layer(cap)
        out: list[EocElement] = []
        for layer in self._layers[: radius + 1]:
            out.extend(layer)
        return out

    def word_length(self, w: EocElement, cap: int = DEFAULT_BALL_CAP) -> int:
        """Exact minimal token count over all representatives, via BFS from 1."""
        while w not in self._lengths:
            self._grow_layer(cap)
        return self._lengths[w]


def make_group(
    alphabet: Alphabet, stages: Sequence[tuple[Word, int]]
) -> EocGroup:
    return EocGroup(alphabet, stages)


def load_group_spec(text: str) -> EocGroup:
    """Parse the group spec document: {"free_rank": k, "stages": [{"u":..., "rank":...}]}."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise GroupSpecError(f"spec is not valid JSON: {e}") from e
    if not isinstance(doc, dict) or "free_rank" not in doc:
        raise GroupSpecError("spec must be an object with a 'free_rank' field")
    alphabet = Alphabet(int(doc["free_rank"]))
    stages = []
    for j, entry in enumerate(doc.get("stages", [])):
        try:
            u = parse_word(alphabet, entry["u"])
            rank = int(entry["rank"])
        except (KeyError, TypeError) as e:
            raise GroupSpecError(f"bad stage entry: {e}", stage=j) from e
        stages.append((u, rank))
    return EocGroup(alphabet, stages)
