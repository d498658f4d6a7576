import random

import pytest

from ct_hash.analysis import (
    X1,
    X2,
    AttackReport,
    all_blocks,
    bench_throughput,
    collision_search_h1,
    diffusion_stats,
    encoding_table,
    fiber_via_3dct,
    preimage_search,
    repro_simulation,
    second_preimage_search,
    verify_report,
)
from ct_hash.encoding import bits
from ct_hash.errors import SearchLimitExceeded
from ct_hash.hashing import encode_block
from ct_hash.params import ParameterPair, generate_pair, mones

ONES2 = ParameterPair.unchecked(mones(2), mones(2))


def test_collisions_exist_with_all_ones_weights():
    report = collision_search_h1(2, ONES2)
    assert report.witnesses
    assert verify_report(report, ONES2)
    # every group has distinct members
    for g in report.witnesses:
        assert len(set(g)) == len(g) >= 2


def test_collision_report_for_validated_pair(pair2):
    report = collision_search_h1(2, pair2)
    assert report.space_size == 256
    assert verify_report(report, pair2)
    assert "distinct_outputs" in report.to_text()


def test_enumeration_partitions_the_space(pair2):
    table = encoding_table(pair2)
    members = [b for group in table.values() for b in group]
    assert len(members) == len(set(members)) == 256
    report = collision_search_h1(2, ONES2)
    singles = [g for g in encoding_table(ONES2).values() if len(g) == 1]
    assert sum(len(g) for g in report.witnesses) + len(singles) == 256


def test_two_block_collisions_replay():
    report = collision_search_h1(2, ONES2, block_count=2)
    assert report.space_size == 2**16
    assert report.witnesses and verify_report(report, ONES2)


def test_attack_caps(pair3):
    with pytest.raises(SearchLimitExceeded):
        collision_search_h1(3, pair3)
    with pytest.raises(SearchLimitExceeded):
        collision_search_h1(2, ONES2, block_count=3)


def test_preimage_self_witness(pair2):
    block = bits("10110010")
    y = encode_block(block, pair2)
    report = preimage_search(y, 2, pair2)
    assert (block,) in report.witnesses
    assert verify_report(report, pair2)


def test_preimage_wrong_length_is_empty(pair2):
    assert preimage_search(bits("101"), 2, pair2).witnesses == []
    assert fiber_via_3dct(bits("101"), 2, pair2) == set()


def test_second_preimage_with_all_ones():
    report = collision_search_h1(2, ONES2)
    a, b = report.witnesses[0][:2]
    sp = second_preimage_search(a, 2, ONES2)
    assert (b,) in sp.witnesses and (a,) not in sp.witnesses
    assert verify_report(sp, ONES2)


def test_fibers_agree_with_3dct_route_all_ones():
    table = encoding_table(ONES2)
    for y, group in table.items():
        assert fiber_via_3dct(y, 2, ONES2) == set(group)


def test_tampered_report_fails_replay(pair2):
    block = bits("00000001")
    report = preimage_search(encode_block(block, pair2), 2, pair2)
    report.witnesses.append((bits("11111111"),))
    assert not verify_report(report, pair2)


def test_report_formats(pair2):
    report = preimage_search(encode_block(bits("01010101"), pair2), 2, pair2)
    kv = report.to_kv().splitlines()
    assert kv[0].startswith("record=summary mode=preimage")
    assert all("=" in tok for line in kv for tok in line.split())
    assert isinstance(report, AttackReport)


def test_all_blocks_order():
    blocks = list(all_blocks(2))
    assert len(blocks) == 256
    assert blocks[0].to01() == "00000000" and blocks[5].to01() == "00000101"


def test_repro_simulation():
    v = repro_simulation()
    assert X1 != X2
    assert v.differing_bytes == 6
    assert v.md5_collide and v.h3_differ and v.passed
    assert "verdict: PASS" in v.to_text()


def test_diffusion_stats_basics(pair2):
    s = diffusion_stats(2, pair2, 30, seed=1)
    assert s.trials == 30 and 0 <= s.h1_changed_fraction <= 1
    assert s.digest_bits == 128 and 0 <= s.min_hamming <= s.max_hamming <= 128
    assert diffusion_stats(2, pair2, 30, seed=1) == s
    with pytest.raises(ValueError):
        diffusion_stats(2, pair2, 0)


def test_diffusion_validated_vs_all_ones_n4():
    p = generate_pair(4, 2)
    ones4 = ParameterPair.unchecked(mones(4), mones(4))
    ours = diffusion_stats(4, p, 40, seed=3)
    base = diffusion_stats(4, ones4, 40, seed=3)
    # any single flip moves some marginal by a positive weight, so both are 1
    assert ours.h1_changed_fraction == base.h1_changed_fraction == 1.0


def test_bench_empty_payload(pair2):
    r = bench_throughput(2, pair2, payload_size=0, repeats=1)
    assert r.payload_size == 0 and r.mb_per_s == 0.0


def test_bench_roughly_linear(pair2):
    small = bench_throughput(2, pair2, payload_size=2000, repeats=5)
    large = bench_throughput(2, pair2, payload_size=4000, repeats=5)
    ratio = large.seconds / small.seconds
    assert 1.0 <= ratio <= 3.0, ratio


def test_bench_reports_both_sizes(pair2):
    from ct_hash.params import paper_pair

    r8 = bench_throughput(8, paper_pair(), payload_size=256, repeats=1)
    r2 = bench_throughput(2, pair2, payload_size=256, repeats=1)
    assert r8.seconds > 0 and r2.seconds > 0
    assert "mb_per_s=" in r8.to_kv()
