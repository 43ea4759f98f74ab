import random

import pytest

from retrofitkit.core import MeasureId, OutcomeRecord
from retrofitkit.ranking import (
    DPY_RETENTION_LIMIT_YEARS,
    DuplicateBuildingId,
    EmptyOutcomeSet,
    GroundTruthStore,
    Objective,
    rank_co2,
    rank_dpy,
)

MEASURES = list(MeasureId)


def outcome(measure, co2=100.0, saving=50.0, dpy=10, cost=1000.0):
    return OutcomeRecord(
        building_id="b-1",
        measure=measure,
        co2_reduction_kg=co2,
        net_site_energy_reduction_kwh=co2 * 2,
        energy_cost_saving_usd=saving,
        retrofit_cost_usd=cost,
        dpy=dpy,
    )


class TestRankCo2:
    def test_descending_by_reduction(self):
        outcomes = [
            outcome(MeasureId.WALL_INSULATION, co2=10.0),
            outcome(MeasureId.PV_INSTALLATION, co2=500.0),
            outcome(MeasureId.AIR_SEALING, co2=200.0),
            outcome(MeasureId.LIGHTING_REPLACEMENT, co2=50.0),
        ]
        ranked = rank_co2(outcomes)
        assert [o.measure for o in ranked] == [
            MeasureId.PV_INSTALLATION,
            MeasureId.AIR_SEALING,
            MeasureId.LIGHTING_REPLACEMENT,
        ]

    def test_matches_sort_oracle_on_random_sets(self):
        rng = random.Random(5)
        order_index = {m: i for i, m in enumerate(MeasureId)}
        for _ in range(200):
            chosen = rng.sample(MEASURES, rng.randint(1, 9))
            outcomes = [
                outcome(m, co2=rng.choice([rng.uniform(-50, 500), 100.0]))
                for m in chosen
            ]
            expected = sorted(
                outcomes, key=lambda o: (-o.co2_reduction_kg, order_index[o.measure])
            )[:3]
            assert rank_co2(outcomes) == expected

    def test_ties_break_by_catalog_order(self):
        outcomes = [
            outcome(MeasureId.WATER_HEATER_REPLACEMENT, co2=100.0),
            outcome(MeasureId.WALL_INSULATION, co2=100.0),
            outcome(MeasureId.HVAC_UPGRADE, co2=100.0, dpy=None),
        ]
        ranked = rank_co2(outcomes)
        assert [o.measure for o in ranked] == [
            MeasureId.WALL_INSULATION,
            MeasureId.HVAC_UPGRADE,
            MeasureId.WATER_HEATER_REPLACEMENT,
        ]

    def test_no_payback_measures_are_retained(self):
        outcomes = [outcome(MeasureId.WALL_INSULATION, co2=10.0, dpy=None)]
        assert len(rank_co2(outcomes)) == 1

    def test_empty_input_raises(self):
        with pytest.raises(EmptyOutcomeSet):
            rank_co2([])


class TestRankDpy:
    def test_ascending_by_payback(self):
        outcomes = [
            outcome(MeasureId.WALL_INSULATION, dpy=20),
            outcome(MeasureId.LIGHTING_REPLACEMENT, dpy=2),
            outcome(MeasureId.AIR_SEALING, dpy=11),
            outcome(MeasureId.PV_INSTALLATION, dpy=29),
        ]
        ranked = rank_dpy(outcomes)
        assert [o.measure for o in ranked] == [
            MeasureId.LIGHTING_REPLACEMENT,
            MeasureId.AIR_SEALING,
            MeasureId.WALL_INSULATION,
        ]

    def test_excludes_no_payback_and_beyond_limit(self):
        outcomes = [
            outcome(MeasureId.WALL_INSULATION, dpy=None),
            outcome(MeasureId.AIR_SEALING, dpy=DPY_RETENTION_LIMIT_YEARS + 1),
            outcome(MeasureId.LIGHTING_REPLACEMENT, dpy=3),
        ]
        ranked = rank_dpy(outcomes)
        assert [o.measure for o in ranked] == [MeasureId.LIGHTING_REPLACEMENT]

    def test_limit_year_itself_is_retained(self):
        outcomes = [outcome(MeasureId.AIR_SEALING, dpy=DPY_RETENTION_LIMIT_YEARS)]
        assert len(rank_dpy(outcomes)) == 1

    def test_may_return_empty_without_padding(self):
        outcomes = [outcome(MeasureId.WALL_INSULATION, dpy=None)]
        assert rank_dpy(outcomes) == []

    def test_ties_break_by_larger_saving_then_catalog_order(self):
        outcomes = [
            outcome(MeasureId.WATER_HEATER_REPLACEMENT, dpy=5, saving=80.0),
            outcome(MeasureId.WALL_INSULATION, dpy=5, saving=40.0),
            outcome(MeasureId.AIR_SEALING, dpy=5, saving=80.0),
        ]
        ranked = rank_dpy(outcomes)
        assert [o.measure for o in ranked] == [
            MeasureId.AIR_SEALING,
            MeasureId.WATER_HEATER_REPLACEMENT,
            MeasureId.WALL_INSULATION,
        ]

    def test_matches_sort_oracle_on_random_sets(self):
        rng = random.Random(9)
        order_index = {m: i for i, m in enumerate(MeasureId)}
        for _ in range(200):
            chosen = rng.sample(MEASURES, rng.randint(1, 9))
            outcomes = [
                outcome(
                    m,
                    dpy=rng.choice([None, 1, 5, 5, 40, 100, 101, 250]),
                    saving=rng.choice([10.0, 50.0, 50.0, 90.0]),
                )
                for m in chosen
            ]
            eligible = [
                o
                for o in outcomes
                if o.dpy is not None and o.dpy <= DPY_RETENTION_LIMIT_YEARS
            ]
            expected = sorted(
                eligible,
                key=lambda o: (
                    o.dpy,
                    -o.energy_cost_saving_usd,
                    order_index[o.measure],
                ),
            )[:3]
            assert rank_dpy(outcomes) == expected


class TestStore:
    def test_save_load_round_trip(self, small_store, tmp_path):
        path = tmp_path / "store.jsonl"
        small_store.save(path)
        loaded = GroundTruthStore.load(path)
        assert loaded.building_ids() == small_store.building_ids()
        for bid in loaded.building_ids():
            a, b = loaded.get(bid), small_store.get(bid)
            assert a.record == b.record
            assert a.baseline_fuels == b.baseline_fuels
            assert a.measure_fuels == b.measure_fuels
            assert a.outcomes == b.outcomes
            assert a.truth.rankings == b.truth.rankings

    def test_save_is_byte_identical(self, small_store, tmp_path):
        p1, p2 = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
        small_store.save(p1)
        GroundTruthStore.load(p1).save(p2)
        assert p1.read_bytes() == p2.read_bytes()

    def test_load_detects_tampering(self, small_store, tmp_path):
        path = tmp_path / "store.jsonl"
        small_store.save(path)
        raw = path.read_bytes()
        # flip one digit somewhere in the body, past the manifest line
        body_start = raw.index(b"\n") + 1
        idx = raw.index(b"7", body_start)
        tampered = raw[:idx] + b"8" + raw[idx + 1 :]
        path.write_bytes(tampered)
        with pytest.raises(ValueError):
            GroundTruthStore.load(path)

    def test_load_detects_count_mismatch(self, small_store, tmp_path):
        path = tmp_path / "store.jsonl"
        small_store.save(path)
        lines = path.read_text().splitlines(keepends=True)
        path.write_text("".join(lines[:-1]))
        with pytest.raises(ValueError):
            GroundTruthStore.load(path)

    def test_duplicate_building_rejected(self, small_store):
        bid = small_store.building_ids()[0]
        with pytest.raises(DuplicateBuildingId):
            small_store.add(small_store.get(bid))

    def test_truth_rankings_present_for_both_objectives(self, small_store):
        for bid in small_store.building_ids():
            truth = small_store.truth(bid)
            assert set(truth.rankings) == set(Objective)
            co2_list = truth.ranked(Objective.MAX_CO2_REDUCTION)
            assert 1 <= len(co2_list) <= 3
            values = [o.co2_reduction_kg for o in co2_list]
            assert values == sorted(values, reverse=True)
