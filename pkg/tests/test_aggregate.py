import pytest
from hypothesis import given, strategies as st

from hdbprep.aggregate import (
    SENTINEL_WEIGHT,
    AggregationSettings,
    HouseholdRun,
    Reducer,
    aggregate_all,
    aggregate_run,
    count_adults_children,
    faofam_member_weight,
    group_consecutive,
    oxford_member_weight,
    reduce_chief_label,
    reduce_dmp,
    reduce_first_label,
    reduce_scale_sum,
    reduce_size,
    reduce_total_income,
)
from hdbprep.errors import (
    BadAgeTokenError,
    BadGenderTokenError,
    MissingIncomeError,
    NonConsecutiveKeyError,
    ZeroScaleError,
)
from hdbprep.identity import make_household_key
from hdbprep.model import (
    AgeEncoding,
    GenderEncoding,
    Member,
    MissingAgePolicy,
    ScaleKind,
    ScaleSpec,
)

YEARS = AgeEncoding.YEARS
M1F2 = GenderEncoding.MALE1_FEMALE2


def key(h):
    return make_household_key("1", "1", "1", str(h))


def member(line, age, gender="1", chief=False, area="1", income=None):
    return Member(
        line=line,
        age_raw=str(age),
        gender_raw=str(gender),
        area=area,
        is_chief=chief,
        income=income,
    )


def run_of(*members, h=1):
    return HouseholdRun(key(h), tuple(members))


class TestGroupConsecutive:
    def test_single_run(self):
        rows = [(key(1), member(1, 30)), (key(1), member(2, 10))]
        runs = list(group_consecutive(rows))
        assert len(runs) == 1
        assert [m.line for m in runs[0].members] == [1, 2]

    def test_boundary_between_households(self):
        rows = [
            (key(1), member(1, 30)),
            (key(2), member(2, 40)),
            (key(2), member(3, 8)),
        ]
        runs = list(group_consecutive(rows))
        assert [r.key.canonical for r in runs] == ["R1M1C1H1", "R1M1C1H2"]
        assert [len(r.members) for r in runs] == [1, 2]

    def test_reappearing_key_aborts(self):
        rows = [
            (key(1), member(1, 30)),
            (key(2), member(2, 40)),
            (key(1), member(3, 8)),
        ]
        with pytest.raises(NonConsecutiveKeyError) as info:
            list(group_consecutive(rows))
        assert info.value.line == 3
        assert "R1M1C1H1" in str(info.value)

    def test_empty_stream(self):
        assert list(group_consecutive([])) == []

    def test_empty_run_rejected(self):
        with pytest.raises(ValueError):
            HouseholdRun(key(1), ())


class TestReducer:
    def test_seed_step_finish(self):
        ages = Reducer(
            lambda m: [m.age_raw],
            lambda acc, m: acc + [m.age_raw],
            lambda acc: ",".join(acc),
        )
        assert ages.over(run_of(member(1, 34), member(2, 10))) == "34,10"

    def test_default_finish_is_identity(self):
        count = Reducer(lambda m: 1, lambda acc, m: acc + 1)
        assert count.over(run_of(member(1, 1), member(2, 2), member(3, 3))) == 3

    def test_size(self):
        assert reduce_size(run_of(member(1, 30))) == 1
        assert reduce_size(run_of(member(1, 30), member(2, 5), member(3, 7))) == 3


class TestOxfordSum:
    def test_reference_household(self):
        # chief 1.0 + other adult 0.7 + child 0.5
        run = run_of(member(1, 34, chief=True), member(2, 30), member(3, 10))
        weight = oxford_member_weight(YEARS)
        assert reduce_scale_sum(run, weight) == pytest.approx(2.2)

    def test_child_chief_counts_as_child(self):
        run = run_of(member(1, 10, chief=True), member(2, 40))
        assert reduce_scale_sum(run, oxford_member_weight(YEARS)) == pytest.approx(1.2)

    def test_bad_age_raises_with_line(self):
        run = run_of(member(1, 34, chief=True), member(2, "??"))
        with pytest.raises(BadAgeTokenError) as info:
            reduce_scale_sum(run, oxford_member_weight(YEARS))
        assert info.value.line == 2

    def test_chief_age_is_still_parsed(self):
        # chief status must not skip age validation
        run = run_of(member(1, "abc", chief=True))
        with pytest.raises(BadAgeTokenError):
            reduce_scale_sum(run, oxford_member_weight(YEARS))

    def test_sentinel_mode_flags_instead(self):
        run = run_of(member(1, 34, chief=True), member(2, "??"))
        weight = oxford_member_weight(YEARS, paper_sentinel=True)
        assert reduce_scale_sum(run, weight) == pytest.approx(1.0 + SENTINEL_WEIGHT)


class TestFaofamSum:
    def test_reference_household(self):
        # male adult 1.0 + female adult 0.8 + child 0.5
        run = run_of(member(1, 34, "1"), member(2, 30, "2"), member(3, 10, "1"))
        weight = faofam_member_weight(YEARS, M1F2)
        assert reduce_scale_sum(run, weight) == pytest.approx(2.3)

    def test_child_gender_never_read(self):
        run = run_of(member(1, 9, "garbled"))
        weight = faofam_member_weight(YEARS, M1F2)
        assert reduce_scale_sum(run, weight) == 0.5

    def test_adult_bad_gender_raises_with_line(self):
        run = run_of(member(1, 30, "1"), member(2, 41, "9"))
        with pytest.raises(BadGenderTokenError) as info:
            reduce_scale_sum(run, faofam_member_weight(YEARS, M1F2))
        assert info.value.line == 2

    def test_adult_bad_gender_sentinel(self):
        run = run_of(member(1, 41, "9"))
        weight = faofam_member_weight(YEARS, M1F2, paper_sentinel=True)
        assert reduce_scale_sum(run, weight) == SENTINEL_WEIGHT

    def test_other_gender_encoding(self):
        run = run_of(member(1, 30, "0"), member(2, 30, "1"))
        weight = faofam_member_weight(YEARS, GenderEncoding.MALE0_FEMALE1)
        assert reduce_scale_sum(run, weight) == pytest.approx(1.8)


class TestCounts:
    def test_split(self):
        run = run_of(member(1, 34), member(2, 15), member(3, 14.9), member(4, 2))
        assert count_adults_children(run, YEARS) == (2, 2)

    def test_class_encoding(self):
        run = run_of(member(1, 4), member(2, 3))
        assert count_adults_children(run, AgeEncoding.FIVE_YEAR_CLASSES) == (1, 1)

    def test_strict_rejects_bad_token(self):
        run = run_of(member(1, 34), member(2, "old"))
        with pytest.raises(BadAgeTokenError) as info:
            count_adults_children(run, YEARS)
        assert info.value.line == 2

    def test_sentinel_coerces_numeric_prefix(self):
        # "25ans" reads as 25 (adult), "abc" as 0 (child)
        run = run_of(member(1, "25ans"), member(2, "abc"))
        assert count_adults_children(run, YEARS, paper_sentinel=True) == (1, 1)

    def test_unknown_age_code_warns_under_strict_policy(self):
        warnings = []
        run = run_of(member(1, 99))
        counts = count_adults_children(
            run, YEARS, missing_age_policy=MissingAgePolicy.STRICT, warnings=warnings
        )
        assert counts == (1, 0)
        assert [w.code for w in warnings] == ["AGE_MISSING"]
        assert warnings[0].line == 1

    def test_unknown_age_code_silent_by_default(self):
        warnings = []
        run = run_of(member(1, 99))
        count_adults_children(run, YEARS, warnings=warnings)
        assert warnings == []


class TestDmp:
    def test_reference_values(self):
        run = run_of(
            member(1, 30),
            member(2, 40),
            member(3, 8),
            member(4, 5),
            member(5, 1),
        )
        assert reduce_dmp(run, 0.5, 0.7, YEARS) == pytest.approx(3.5 ** 0.7)

    def test_sentinel_counting_feeds_formula(self):
        run = run_of(member(1, "abc"), member(2, 30))
        value = reduce_dmp(run, 0.5, 0.7, YEARS, paper_sentinel=True)
        assert value == pytest.approx(1.5 ** 0.7)


class TestIncome:
    def test_total(self):
        run = run_of(member(1, 30, income=14500.0), member(2, 40, income=39500.0))
        assert reduce_total_income(run) == pytest.approx(54000.0)

    def test_missing_amount_located(self):
        run = run_of(member(1, 30, income=14500.0), member(2, 40))
        with pytest.raises(MissingIncomeError) as info:
            reduce_total_income(run)
        assert info.value.line == 2


class TestLabels:
    def test_area_is_first_member_token(self):
        run = run_of(member(1, 30, area="7"), member(2, 40, area="7"))
        assert reduce_first_label(run) == "7"

    def test_heterogeneous_area_warns_once(self):
        warnings = []
        run = run_of(
            member(1, 30, area="7"),
            member(2, 40, area="8"),
            member(3, 10, area="9"),
        )
        assert reduce_first_label(run, warnings) == "7"
        assert [w.code for w in warnings] == ["HETEROGENEOUS_AREA"]
        assert warnings[0].line == 2

    def test_chief_gender_token_exported_verbatim(self):
        run = run_of(member(1, 30, "2"), member(2, 40, "1", chief=True))
        assert reduce_chief_label(run) == "1"

    def test_no_chief_sentinel_label(self):
        run = run_of(member(1, 30), member(2, 40))
        assert reduce_chief_label(run) == "XXX"

    def test_last_chief_wins_and_warns(self):
        warnings = []
        run = run_of(
            member(1, 30, "1", chief=True),
            member(2, 28, "2", chief=True),
        )
        assert reduce_chief_label(run, warnings) == "2"
        assert [w.code for w in warnings] == ["MULTIPLE_CHIEFS"]

    def test_chief_flag_is_exact_token_match(self):
        run = run_of(member(1, 30, "2", chief=False))
        assert reduce_chief_label(run) == "XXX"


class TestSettings:
    def test_duplicate_scale_kind_rejected(self):
        with pytest.raises(ValueError):
            AggregationSettings(
                YEARS,
                M1F2,
                scales=(ScaleSpec(ScaleKind.OXFORD), ScaleSpec(ScaleKind.OXFORD)),
            )

    def test_scaled_by_requires_income(self):
        with pytest.raises(ValueError):
            AggregationSettings(
                YEARS,
                M1F2,
                scales=(ScaleSpec(ScaleKind.OXFORD),),
                scaled_by=ScaleKind.OXFORD,
            )

    def test_scaled_by_must_be_configured(self):
        with pytest.raises(ValueError):
            AggregationSettings(
                YEARS,
                M1F2,
                scales=(ScaleSpec(ScaleKind.OXFORD),),
                income_enabled=True,
                scaled_by=ScaleKind.DMP,
            )

    def test_spec_lookup(self):
        spec = ScaleSpec(ScaleKind.DMP, dmp_c=0.5, dmp_s=0.7)
        settings = AggregationSettings(YEARS, M1F2, scales=(spec,))
        assert settings.spec_for(ScaleKind.DMP) is spec
        assert settings.spec_for(ScaleKind.OXFORD) is None


ALL_SCALES = (
    ScaleSpec(ScaleKind.OXFORD),
    ScaleSpec(ScaleKind.FAOFAM),
    ScaleSpec(ScaleKind.DMP, dmp_c=0.5, dmp_s=0.7),
)


class TestAggregateRun:
    def test_full_statistics(self):
        run = run_of(
            member(1, 34, "1", chief=True, income=125000.0),
            member(2, 30, "2", income=39500.0),
            member(3, 10, "1", income=14500.0),
        )
        settings = AggregationSettings(
            YEARS,
            M1F2,
            scales=ALL_SCALES,
            income_enabled=True,
            scaled_by=ScaleKind.OXFORD,
        )
        agg = aggregate_run(run, settings)
        assert agg.size == 3
        assert (agg.n_adults, agg.n_children) == (2, 1)
        assert agg.scale_oxford == pytest.approx(2.2)
        assert agg.scale_faofam == pytest.approx(2.3)
        assert agg.scale_dmp == pytest.approx(2.5 ** 0.7)
        assert agg.total_income == pytest.approx(179000.0)
        assert agg.scaled_income == pytest.approx(179000.0 / 2.2)
        assert agg.label_area == "1"
        assert agg.label_chief_gender == "1"

    def test_unconfigured_fields_stay_none(self):
        run = run_of(member(1, 34))
        agg = aggregate_run(run, AggregationSettings(YEARS, M1F2))
        assert agg.scale_oxford is None
        assert agg.scale_faofam is None
        assert agg.scale_dmp is None
        assert agg.total_income is None
        assert agg.scaled_income is None
        assert agg.size == 1

    def test_zero_scale_cannot_divide(self):
        # c=0 erases a children-only household from the DMP count
        run = run_of(member(1, 5, income=1000.0))
        settings = AggregationSettings(
            YEARS,
            M1F2,
            scales=(ScaleSpec(ScaleKind.DMP, dmp_c=0.0, dmp_s=0.7),),
            income_enabled=True,
            scaled_by=ScaleKind.DMP,
        )
        with pytest.raises(ZeroScaleError):
            aggregate_run(run, settings)

    def test_missing_age_warning_deduplicated(self):
        # oxford, faofam and the counting pass each parse the same token;
        # the caller must still see one warning
        warnings = []
        run = run_of(member(1, 99, "1"))
        settings = AggregationSettings(
            YEARS,
            M1F2,
            scales=ALL_SCALES,
            missing_age_policy=MissingAgePolicy.STRICT,
        )
        aggregate_run(run, settings, warnings)
        assert [w.code for w in warnings] == ["AGE_MISSING"]

    def test_distinct_warnings_all_kept(self):
        warnings = []
        run = run_of(
            member(1, 99, "1", chief=True, area="1"),
            member(2, 30, "2", chief=True, area="2"),
        )
        settings = AggregationSettings(
            YEARS,
            M1F2,
            scales=ALL_SCALES,
            missing_age_policy=MissingAgePolicy.STRICT,
        )
        aggregate_run(run, settings, warnings)
        codes = sorted(w.code for w in warnings)
        assert codes == ["AGE_MISSING", "HETEROGENEOUS_AREA", "MULTIPLE_CHIEFS"]


class TestAggregateAll:
    def test_streams_in_input_order(self):
        rows = [
            (key(2), member(1, 30)),
            (key(1), member(2, 40)),
            (key(1), member(3, 8)),
        ]
        settings = AggregationSettings(YEARS, M1F2)
        out = list(aggregate_all(rows, settings))
        assert [a.key.canonical for a in out] == ["R1M1C1H2", "R1M1C1H1"]
        assert [a.size for a in out] == [1, 2]

    def test_sizes_conserve_person_count(self):
        rows = []
        line = 0
        for h, size in enumerate([3, 1, 4], start=1):
            for _ in range(size):
                line += 1
                rows.append((key(h), member(line, 20 + line)))
        out = list(aggregate_all(rows, AggregationSettings(YEARS, M1F2)))
        assert sum(a.size for a in out) == line
        assert len(out) == 3


households = st.lists(
    st.lists(
        st.tuples(
            st.floats(min_value=0, max_value=98, allow_nan=False),
            st.sampled_from(["1", "2"]),
            st.booleans(),
        ),
        min_size=1,
        max_size=6,
    ),
    min_size=1,
    max_size=8,
)


@given(households)
def test_aggregate_invariants(hh):
    rows = []
    line = 0
    for h, people in enumerate(hh, start=1):
        for age, gender, chief in people:
            line += 1
            rows.append((key(h), member(line, age, gender, chief=chief)))
    settings = AggregationSettings(YEARS, M1F2, scales=ALL_SCALES)
    out = list(aggregate_all(rows, settings))
    assert sum(a.size for a in out) == line
    for agg in out:
        assert agg.n_adults + agg.n_children == agg.size
        # every member weighs between 0.5 and 1.0 under both scales
        assert 0.5 * agg.size <= agg.scale_oxford <= 1.0 * agg.size
        assert 0.5 * agg.size <= agg.scale_faofam <= 1.0 * agg.size
        assert agg.scale_dmp > 0
