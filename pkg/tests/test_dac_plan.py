"""Level-width planning for the chunked codec: the plan must be optimal."""

import random

import numpy as np

from civec import build, plan_level_widths


def bitmap_cost(m):
    # one continuation bit per chunk, word-padded, plus a rank entry per 512
    return 64 * ((m + 63) // 64) + 64 * ((m >> 9) + 1)


def plan_cost(values, widths):
    """Exact stored bits of a level plan: chunks plus non-final bitmaps."""
    lens = [max(int(x).bit_length(), 1) for x in values]
    total, t = 0, 0
    for idx, b in enumerate(widths):
        m = sum(1 for L in lens if L > t)
        total += m * b
        if idx < len(widths) - 1:
            total += bitmap_cost(m)
        t += b
    return total


def fixed_plan(maxlen, b):
    return tuple([b] * ((maxlen + b - 1) // b))


def random_vector(rng):
    n = rng.randrange(50, 2000)
    shape = rng.randrange(3)
    if shape == 0:  # geometric-ish bit lengths
        return [rng.randrange(1 << rng.randrange(1, 30)) for _ in range(n)]
    if shape == 1:  # bimodal: mostly tiny, a few wide
        return [rng.randrange(8) if rng.random() < 0.85
                else rng.randrange(1 << 37) for _ in range(n)]
    return [rng.randrange(1 << 24) for _ in range(n)]


def test_model_matches_built_accounting():
    rng = random.Random(0xDAC)
    for _ in range(20):
        vals = random_vector(rng)
        maxlen = max(max(int(v).bit_length() for v in vals), 1)
        plans = [plan_level_widths(vals)]
        plans += [fixed_plan(maxlen, b) for b in (1, 3, maxlen)]
        for plan in plans:
            vec = build(vals, "dac", dac_widths=plan)
            rep = vec.size_report()
            assert rep.payload_bits + rep.aux_bits == plan_cost(vals, plan), \
                (plan, maxlen)
            assert vec.decode_all().tolist() == vals


def test_plan_never_loses_to_fixed_widths():
    rng = random.Random(0x0B)
    for trial in range(100):
        vals = random_vector(rng)
        maxlen = max(max(int(v).bit_length() for v in vals), 1)
        plan = plan_level_widths(vals)
        assert sum(plan) >= maxlen
        dp = plan_cost(vals, plan)
        for b in range(1, maxlen + 1):
            assert dp <= plan_cost(vals, fixed_plan(maxlen, b)), (trial, b)


def test_built_sizes_follow_the_plan_ordering():
    rng = random.Random(0x1D)
    vals = random_vector(rng)
    maxlen = max(int(v).bit_length() for v in vals)
    dp_bits = build(vals, "dac").size_report()
    assert build(vals, "dac").widths == plan_level_widths(vals)
    for b in (1, 2, maxlen // 2 or 1, maxlen):
        fixed = build(vals, "dac", dac_widths=fixed_plan(maxlen, b))
        rep = fixed.size_report()
        assert dp_bits.payload_bits + dp_bits.aux_bits \
            <= rep.payload_bits + rep.aux_bits


def test_uniform_data_collapses_to_one_level():
    vals = [(1 << 19) + i for i in range(500)]  # all 20-bit
    assert plan_level_widths(vals) == (20,)
    vec = build(vals, "dac")
    assert vec.nlevels == 1
    rep = vec.size_report()
    assert rep.payload_bits == 500 * 20
    assert rep.aux_bits == 0  # the only level is last, so no bitmap


def test_degenerate_plans():
    assert plan_level_widths([]) == (1,)
    assert plan_level_widths([0, 0, 0]) == (1,)
    vec = build([0, 0, 0], "dac")
    assert vec.decode_all().tolist() == [0, 0, 0]
    vec = build([0, 1, 0, 1], "dac_zz")
    assert vec.decode_all().tolist() == [0, 1, 0, 1]
