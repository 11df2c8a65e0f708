"""Guessing strategies and their worst-case guarantees.

Four strategies live here:

* pairing: partners answer about each other so exactly one of every pair
  is right, for a guaranteed n/2 correct guesses on any distribution;
* majority: everyone calls the color they see more of, which scores
  max{r, b} whenever the distribution is imbalanced but collapses to zero
  correct guesses on a balanced one;
* partial block rule: inside a block of players, call red on seeing many
  red hats in the block, blue on seeing few, and fall back to the pairing
  rule in between;
* composite: partition the players into blocks, derive each block's
  thresholds from the hats *outside* the block so that at most one block
  can land in its bad cases, and run the partial rule per block.  This
  tracks max{r, b} up to a structural loss of max_block/2 + (k-1)^2,
  which the block sizing keeps below 1.2 * n^(2/3) + 1 for even n.

Rule objects are immutable after construction, pure, and picklable, so
sweeps can fan them out across worker processes.  Each built-in rule also
implements ``bulk_guesses(red_mask) -> guess_mask``, a whole-profile bit
fast path used by the exhaustive and sampled sweeps.
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import (
    Color,
    ContractError,
    GuessRule,
    HatDistribution,
    StrategyProfile,
    VisibleView,
    full_mask,
    mask_of,
)


@dataclass(frozen=True)
class Pairing:
    """Ordered disjoint pairs (x, y) of players; the order within a pair matters.

    The first player of a pair calls the partner's color, the second calls
    the opposite, so exactly one of the two is always right.
    """

    pairs: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        if not self.pairs:
            raise ContractError("a pairing needs at least one pair")
        seen: set[int] = set()
        partner: dict[int, int] = {}
        first: set[int] = set()
        for x, y in self.pairs:
            if x == y:
                raise ContractError(f"player {x} paired with itself")
            if x < 1 or y < 1:
                raise ContractError(f"invalid player index in pair ({x}, {y})")
            if x in seen or y in seen:
                raise ContractError(f"player appears in two pairs: ({x}, {y})")
            seen.update((x, y))
            partner[x] = y
            partner[y] = x
            first.add(x)
        object.__setattr__(self, "_partner", partner)
        object.__setattr__(self, "_first", frozenset(first))
        object.__setattr__(self, "_covers", frozenset(seen))

    @property
    def n(self) -> int:
        """Number of paired players (twice the pair count)."""
        return 2 * len(self.pairs)

    @property
    def covers(self) -> frozenset[int]:
        """The set of players the pairing touches."""
        return self._covers  # type: ignore[attr-defined]

    def partner_of(self, player: int) -> int:
        try:
            return self._partner[player]  # type: ignore[attr-defined]
        except KeyError:
            raise ContractError(f"player {player} is not in the pairing") from None

    def is_first(self, player: int) -> bool:
        """True when ``player`` is the x of its pair (the same-color caller)."""
        if player not in self._partner:  # type: ignore[attr-defined]
            raise ContractError(f"player {player} is not in the pairing")
        return player in self._first  # type: ignore[attr-defined]

    def restricted_to(self, players: frozenset[int]) -> Pairing:
        """The sub-pairing covering exactly ``players``; every pair must be inside or outside."""
        kept = []
        for x, y in self.pairs:
            inside = (x in players) + (y in players)
            if inside == 1:
                raise ContractError(f"pair ({x}, {y}) straddles the player subset")
            if inside == 2:
                kept.append((x, y))
        sub = Pairing(tuple(kept))
        if sub.covers != players:
            raise ContractError("subset contains unpaired players")
        return sub


def canonical_pairing(n: int) -> Pairing:
    """The agreed-in-advance pairing (1,2), (3,4), ..., (n-1,n)."""
    if n < 2 or n % 2:
        raise ContractError(f"a pairing needs a positive even player count, got {n}")
    return Pairing(tuple((i, i + 1) for i in range(1, n, 2)))


def _is_canonical(pairing: Pairing) -> bool:
    return pairing.pairs == tuple((i, i + 1) for i in range(1, pairing.n, 2))


# Bit masks of the first/second members of the canonical pairs, i.e. the
# players at odd/even indices.
def _canonical_role_masks(n: int) -> tuple[int, int]:
    x = 0
    for i in range(0, n, 2):
        x |= 1 << i
    return x, full_mask(n) ^ x


class PairingRule:
    """Per-pair rule: x calls y's color, y calls the opposite of x's color.

    Works for any pairing, also one covering only a block of the players;
    the bulk path only ever sets bits at the paired positions.
    """

    def __init__(self, pairing: Pairing):
        self.pairing = pairing
        if _is_canonical(pairing):
            self._x_mask, self._y_mask = _canonical_role_masks(pairing.n)
        else:
            self._x_mask = self._y_mask = None

    def __call__(self, observer: int, view: VisibleView) -> Color:
        partner = self.pairing.partner_of(observer)
        seen = view.color_of(partner)
        return seen if self.pairing.is_first(observer) else seen.opposite()

    def bulk_guesses(self, red_mask: int) -> int:
        if self._x_mask is not None:
            # canonical layout: each x reads the bit above, each y negates the bit below
            return ((red_mask >> 1) & self._x_mask) | ((~red_mask << 1) & self._y_mask)
        g = 0
        for x, y in self.pairing.pairs:
            g |= (red_mask >> (y - 1) & 1) << (x - 1)
            g |= (~red_mask >> (x - 1) & 1) << (y - 1)
        return g


def pairing_strategy(pairing: Pairing) -> StrategyProfile:
    """Full-game profile for a pairing covering all players 1..n."""
    n = pairing.n
    if pairing.covers != frozenset(range(1, n + 1)):
        raise ContractError("pairing must cover exactly the players 1..n")
    return StrategyProfile(n, PairingRule(pairing), "pairing")


class MajorityRule:
    """Guess the color seen more often among the other n-1 hats."""

    def __init__(self, n: int, tie_break: Color):
        self.n = n
        self.tie_break = tie_break
        self._full = full_mask(n)

    def _decide(self, reds: int, blues: int) -> Color:
        if reds > blues:
            return Color.RED
        if blues > reds:
            return Color.BLUE
        return self.tie_break

    def __call__(self, observer: int, view: VisibleView) -> Color:
        reds = view.visible_red_count()
        return self._decide(reds, self.n - 1 - reds)

    def bulk_guesses(self, red_mask: int) -> int:
        r = (red_mask & self._full).bit_count()
        g = 0
        # a red wearer sees r-1 reds, a blue wearer sees r
        if self._decide(r - 1, self.n - r) is Color.RED:
            g |= red_mask & self._full
        if self._decide(r, self.n - 1 - r) is Color.RED:
            g |= self._full & ~red_mask
        return g


def majority_strategy(n: int, tie_break: Color = Color.RED) -> StrategyProfile:
    if n < 2:
        raise ContractError(f"majority strategy needs n >= 2, got {n}")
    return StrategyProfile(n, MajorityRule(n, tie_break), "majority")


@dataclass(frozen=True)
class PartialStrategyParams:
    """One block of players with its two thresholds.

    Members see the block from inside; with v red hats visible in the
    block, a member calls red when v >= red_min, blue when v <= blue_max,
    and plays the pairing rule otherwise.  Admissibility requires
    blue_max < |T|/2 <= red_min and blue_max + 2 <= red_min; blue_max may
    be negative, which simply makes the blue call unreachable.
    """

    members: frozenset[int]
    blue_max: int
    red_min: int
    pairing: Pairing

    def __post_init__(self) -> None:
        if not self.members:
            raise ContractError("empty block")
        if self.pairing.covers != self.members:
            raise ContractError("pairing must cover exactly the block members")
        half2 = len(self.members)  # = 2 * (|T|/2); avoids fractions
        if not (2 * self.blue_max < half2 <= 2 * self.red_min):
            raise ContractError(
                f"thresholds ({self.blue_max}, {self.red_min}) violate "
                f"blue_max < |T|/2 <= red_min for |T|={len(self.members)}"
            )
        if self.blue_max + 2 > self.red_min:
            raise ContractError(
                f"thresholds too close: need blue_max + 2 <= red_min, "
                f"got ({self.blue_max}, {self.red_min})"
            )

    @property
    def size(self) -> int:
        return len(self.members)

    @property
    def members_mask(self) -> int:
        return mask_of(self.members)


class PartialRule:
    """Threshold rule for the members of one block; rejects outside observers."""

    def __init__(self, params: PartialStrategyParams):
        self.params = params
        self._mask = params.members_mask
        self._pairing_rule = PairingRule(params.pairing)

    def __call__(self, observer: int, view: VisibleView) -> Color:
        if observer not in self.params.members:
            raise ContractError(f"player {observer} is not in the block")
        visible_reds = view.count_red(self._mask ^ (1 << (observer - 1)))
        if visible_reds >= self.params.red_min:
            return Color.RED
        if visible_reds <= self.params.blue_max:
            return Color.BLUE
        return self._pairing_rule(observer, view)

    def bulk_guesses(self, red_mask: int) -> int:
        return _threshold_block_guesses(
            red_mask,
            self._mask,
            self.params.blue_max,
            self.params.red_min,
            self._pairing_rule.bulk_guesses(red_mask),
        )


def _threshold_block_guesses(
    red_mask: int, block_mask: int, blue_max: int, red_min: int, pairing_guesses: int
) -> int:
    """Red-guess bits of one block under the threshold rule (bulk path)."""
    c = (red_mask & block_mask).bit_count()
    reds = red_mask & block_mask
    blues = block_mask & ~red_mask
    g = 0
    # red wearers see c-1 red hats in the block, blue wearers see c
    if c - 1 >= red_min:
        g |= reds
    elif c - 1 > blue_max:
        g |= pairing_guesses & reds
    if c >= red_min:
        g |= blues
    elif c > blue_max:
        g |= pairing_guesses & blues
    return g


def partial_strategy(params: PartialStrategyParams) -> PartialRule:
    """Guess rule for the members of one block (raises for other observers)."""
    return PartialRule(params)


class PartialProfileRule:
    """Full-game embedding: block members play the threshold rule, the rest pair up."""

    def __init__(self, params: PartialStrategyParams, n: int):
        self.n = n
        self.params = params
        self._partial = PartialRule(params)
        self._pairing_rule = PairingRule(canonical_pairing(n))
        self._full = full_mask(n)
        self._block_mask = params.members_mask

    def __call__(self, observer: int, view: VisibleView) -> Color:
        if observer in self.params.members:
            return self._partial(observer, view)
        return self._pairing_rule(observer, view)

    def bulk_guesses(self, red_mask: int) -> int:
        pairing_g = self._pairing_rule.bulk_guesses(red_mask)
        block_g = _threshold_block_guesses(
            red_mask, self._block_mask, self.params.blue_max, self.params.red_min, pairing_g
        )
        return block_g | (pairing_g & self._full & ~self._block_mask)


def partial_profile(params: PartialStrategyParams, n: int) -> StrategyProfile:
    """Embed a block rule in an n-player game; outside players play the pairing."""
    if n < 2 or n % 2:
        raise ContractError(f"embedding needs a positive even n, got {n}")
    if any(p > n for p in params.members):
        raise ContractError("block members exceed the player count")
    canonical = canonical_pairing(n)
    if set(params.pairing.pairs) != set(canonical.restricted_to(params.members).pairs):
        raise ContractError("block must consist of whole canonical pairs")
    return StrategyProfile(n, PartialProfileRule(params, n), "partial")


def lemma_table_bound(distribution: HatDistribution, params: PartialStrategyParams) -> int:
    """Guaranteed correct guesses of the block rule, by case on the block's red count.

    With c red hats in the block, m = max{c, |T| - c}, and thresholds
    (a, b) = (blue_max, red_min):

    * c > b: everyone calls red, m = c are right;
    * c = b: blue wearers miscall red, the bound drops to b - |T|/2;
    * a+2 <= c <= b-1: everyone plays the pairing, exactly |T|/2 right;
    * c = a+1: red wearers miscall blue, the bound drops to |T|/2 - a - 1;
    * c <= a: everyone calls blue, m = |T| - c are right.
    """
    t = params.size
    half = t // 2
    c = distribution.count_red(params.members_mask)
    m = max(c, t - c)
    if c > params.red_min:
        return m
    if c == params.red_min:
        return params.red_min - half
    if c == params.blue_max + 1:
        return half - params.blue_max - 1
    if c <= params.blue_max:
        return m
    return half


@dataclass(frozen=True)
class PartitionPlan:
    """Blocks T_1..T_k of even sizes covering 1..n, aligned to whole pairs.

    The first ``large_blocks`` blocks share the larger of the two sizes;
    the size split solves n = l * big + (k - l) * small exactly.
    """

    n: int
    k: int
    large_blocks: int
    blocks: tuple[tuple[int, ...], ...]
    pairing: Pairing

    def __post_init__(self) -> None:
        if self.k < 2 or len(self.blocks) != self.k:
            raise ContractError(f"need k >= 2 blocks, got {len(self.blocks)} for k={self.k}")
        if not 1 <= self.large_blocks <= self.k:
            raise ContractError(f"large block count {self.large_blocks} out of 1..{self.k}")
        seen: set[int] = set()
        for block in self.blocks:
            if len(block) < 2 or len(block) % 2:
                raise ContractError(f"block sizes must be even and >= 2, got {len(block)}")
            if seen & set(block):
                raise ContractError("blocks overlap")
            seen.update(block)
        if seen != set(range(1, self.n + 1)):
            raise ContractError("blocks must cover exactly the players 1..n")
        sizes = self.block_sizes
        big, small = sizes[0], sizes[-1]
        expected = (big,) * self.large_blocks + (small,) * (self.k - self.large_blocks)
        if sizes != expected or big - small not in (0, 2):
            raise ContractError(f"block sizes {sizes} do not follow the large/small split")
        for x, y in self.pairing.pairs:
            if not any(x in b and y in b for b in self.blocks):
                raise ContractError(f"pair ({x}, {y}) straddles a block boundary")
        masks = tuple(mask_of(b) for b in self.blocks)
        object.__setattr__(self, "_masks", masks)
        full = full_mask(self.n)
        object.__setattr__(self, "_outside", tuple(full ^ m for m in masks))
        block_of = {}
        for idx, block in enumerate(self.blocks, start=1):
            for p in block:
                block_of[p] = idx
        object.__setattr__(self, "_block_of", block_of)

    @property
    def block_sizes(self) -> tuple[int, ...]:
        return tuple(len(b) for b in self.blocks)

    def block_mask(self, block_index: int) -> int:
        return self._masks[block_index - 1]  # type: ignore[attr-defined]

    def outside_mask(self, block_index: int) -> int:
        return self._outside[block_index - 1]  # type: ignore[attr-defined]

    def block_of(self, player: int) -> int:
        """1-based index of the block containing ``player``."""
        try:
            return self._block_of[player]  # type: ignore[attr-defined]
        except KeyError:
            raise ContractError(f"player {player} out of range 1..{self.n}") from None

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "k": self.k,
            "l": self.large_blocks,
            "block_sizes": list(self.block_sizes),
            "blocks": [list(b) for b in self.blocks],
        }


def _block_count(n: int) -> int:
    # smallest integer t with t^3 >= n/4, i.e. 4t^3 >= n, floated up to 2
    t = 1
    while 4 * t * t * t < n:
        t += 1
    return max(2, t)


def make_partition(n: int) -> PartitionPlan:
    """Size-balanced partition into k = max(2, cuberoot-ceiling of n/4) even blocks.

    Blocks are consecutive index ranges, so each consists of whole
    canonical pairs.  Needs n >= 4: two blocks of even size cannot be cut
    out of fewer players.
    """
    if n % 2 or n < 4:
        raise ContractError(f"partition needs an even n >= 4, got {n}")
    k = _block_count(n)
    big = 2 * ((n + 2 * k - 1) // (2 * k))  # smallest even >= n/k
    small = 2 * (n // (2 * k))              # largest even <= n/k
    if big == small:
        large = k  # n/k already even: every block is "large"
    else:
        large = (n - k * small) // 2
    sizes = (big,) * large + (small,) * (k - large)
    blocks = []
    start = 1
    for size in sizes:
        blocks.append(tuple(range(start, start + size)))
        start += size
    return PartitionPlan(n, k, large, tuple(blocks), canonical_pairing(n))


def compute_thresholds(
    source: VisibleView | int, plan: PartitionPlan, block_index: int
) -> tuple[int, int]:
    """Thresholds (blue_max, red_min) for one block of the composite.

    red_min is the smallest value >= |T_i|/2 with
    outside_reds + red_min == block_index (mod k);
    blue_max = red_min - k - 1.  The outside red count is read either from
    a member's view (it never includes their own hat) or given directly,
    so every member of the block derives the same pair.
    """
    if not 1 <= block_index <= plan.k:
        raise ContractError(f"block index {block_index} out of 1..{plan.k}")
    if isinstance(source, VisibleView):
        outside_reds = source.count_red(plan.outside_mask(block_index))
    else:
        outside_reds = source
        outside_size = plan.n - len(plan.blocks[block_index - 1])
        if not 0 <= outside_reds <= outside_size:
            raise ContractError(
                f"outside red count {outside_reds} out of 0..{outside_size}"
            )
    half = len(plan.blocks[block_index - 1]) // 2
    red_min = half + (block_index - outside_reds - half) % plan.k
    return red_min - plan.k - 1, red_min


class CompositeRule:
    """Partitioned threshold strategy for even n >= 6.

    Every member of block i derives the block's thresholds from the hats
    outside the block, then plays the block threshold rule.  The modular
    offset in the thresholds guarantees that for any distribution at most
    one block (the one indexed by the total red count mod k) can land in
    its two bad cases.
    """

    def __init__(self, plan: PartitionPlan):
        self.plan = plan
        self._pairing_rule = PairingRule(plan.pairing)
        self._full = full_mask(plan.n)

    def __call__(self, observer: int, view: VisibleView) -> Color:
        plan = self.plan
        i = plan.block_of(observer)
        blue_max, red_min = compute_thresholds(view, plan, i)
        visible_reds = view.count_red(plan.block_mask(i) ^ (1 << (observer - 1)))
        if visible_reds >= red_min:
            return Color.RED
        if visible_reds <= blue_max:
            return Color.BLUE
        return self._pairing_rule(observer, view)

    def bulk_guesses(self, red_mask: int) -> int:
        plan = self.plan
        r = (red_mask & self._full).bit_count()
        pairing_g = self._pairing_rule.bulk_guesses(red_mask)
        g = 0
        for i in range(1, plan.k + 1):
            block_mask = plan.block_mask(i)
            blue_max, red_min = compute_thresholds(
                r - (red_mask & block_mask).bit_count(), plan, i
            )
            g |= _threshold_block_guesses(red_mask, block_mask, blue_max, red_min, pairing_g)
        return g


class SpectatorCompositeRule:
    """Odd-n reduction: player n guesses the majority of what they see
    (tie -> red) and everyone else plays the even-n composite on players
    1..n-1, ignoring hat n entirely."""

    def __init__(self, n: int, inner: GuessRule):
        self.n = n
        self.inner = inner
        self._inner_full = full_mask(n - 1)
        self._inner_half = (n - 1) // 2

    def __call__(self, observer: int, view: VisibleView) -> Color:
        if observer == self.n:
            reds = view.count_red(self._inner_full)
            return Color.RED if reds >= self._inner_half else Color.BLUE
        return self.inner(observer, view)

    def bulk_guesses(self, red_mask: int) -> int:
        inner_bulk = self.inner.bulk_guesses  # type: ignore[attr-defined]
        g = inner_bulk(red_mask & self._inner_full)
        if (red_mask & self._inner_full).bit_count() >= self._inner_half:
            g |= 1 << (self.n - 1)
        return g


def _even_composite_rule(n: int) -> GuessRule:
    if n in (2, 4):
        # no partition into >= 2 even blocks exists at n = 2 and the bound
        # is loose enough at n = 4: the plain pairing already meets it
        return PairingRule(canonical_pairing(n))
    return CompositeRule(make_partition(n))


def composite_strategy(n: int) -> StrategyProfile:
    """The headline strategy: guarantees max{r,b} - 1.2*n^(2/3) - 2 correct guesses.

    For even n the guarantee sharpens to max{r,b} - 1.2*n^(2/3) - 1; odd n
    is handled by the spectator reduction (see SpectatorCompositeRule).
    """
    if n < 2:
        raise ContractError(f"composite strategy needs n >= 2, got {n}")
    if n % 2 == 0:
        rule: GuessRule = _even_composite_rule(n)
    else:
        rule = SpectatorCompositeRule(n, _even_composite_rule(n - 1))
    return StrategyProfile(n, rule, "composite")


@dataclass(frozen=True)
class GuaranteeBound:
    """Worst-case loss bounds below max{r,b} for the composite strategy.

    structural_loss is the exact plan-level bound max_block/2 + (k-1)^2
    (None when no plan is given); the theorem losses are the closed-form
    1.2*n^(2/3) + 1 (even n) and + 2 (any n).
    """

    n: int
    structural_loss: int | None
    theorem_loss_even: float
    theorem_loss_general: float


def guarantee_bound(n: int, plan: PartitionPlan | None = None) -> GuaranteeBound:
    if n < 2:
        raise ContractError(f"bounds need n >= 2, got {n}")
    structural = None
    if plan is not None:
        if plan.n != n:
            raise ContractError(f"plan is for n={plan.n}, asked about n={n}")
        structural = max(plan.block_sizes) // 2 + (plan.k - 1) ** 2
    base = 1.2 * n ** (2.0 / 3.0)
    return GuaranteeBound(n, structural, base + 1.0, base + 2.0)
