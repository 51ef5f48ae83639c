import pytest
from hypothesis import given, strategies as st

from hdbprep.errors import (
    BadAgeTokenError,
    BadGenderTokenError,
    BlankLineError,
    ConfigError,
    EmptyFileError,
    IoError,
    LengthMismatchError,
    MissingColumnError,
    RowArityMismatchError,
)
from hdbprep.ingest import (
    ColumnSource,
    TableSource,
    Variable,
    parse_age,
    parse_gender,
    read_column_file,
    read_column_sources,
    read_table,
    zip_columns,
)
from hdbprep.model import (
    Age,
    AgeEncoding,
    Gender,
    GenderEncoding,
    MissingAgePolicy,
)


def column(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return ColumnSource(path, Variable.REGION)


class TestReadColumnFile:
    def test_plain_lines(self, tmp_path):
        src = column(tmp_path, "a.txt", "1\n2\n3\n")
        assert read_column_file(src) == ["1", "2", "3"]

    def test_missing_final_newline_ok(self, tmp_path):
        src = column(tmp_path, "a.txt", "1\n2")
        assert read_column_file(src) == ["1", "2"]

    def test_crlf_and_padding_stripped(self, tmp_path):
        src = column(tmp_path, "a.txt", " 1 \r\n2\r\n")
        assert read_column_file(src) == ["1", "2"]

    def test_bom_stripped(self, tmp_path):
        path = tmp_path / "a.txt"
        path.write_bytes(b"\xef\xbb\xbf7\n8\n")
        assert read_column_file(ColumnSource(path, Variable.REGION)) == ["7", "8"]

    def test_skip_header(self, tmp_path):
        src = column(tmp_path, "a.txt", "region\n1\n2\n")
        assert read_column_file(src, skip_header=1) == ["1", "2"]

    def test_interior_blank_line_is_an_error(self, tmp_path):
        # a silent skip would shift every later person across files
        src = column(tmp_path, "a.txt", "1\n\n3\n")
        with pytest.raises(BlankLineError) as exc:
            read_column_file(src)
        assert exc.value.line == 2

    def test_empty_file(self, tmp_path):
        src = column(tmp_path, "a.txt", "")
        with pytest.raises(EmptyFileError):
            read_column_file(src)

    def test_header_only_file_is_empty(self, tmp_path):
        src = column(tmp_path, "a.txt", "region\n")
        with pytest.raises(EmptyFileError):
            read_column_file(src, skip_header=1)

    def test_unreadable_path(self, tmp_path):
        src = ColumnSource(tmp_path / "absent.txt", Variable.REGION)
        with pytest.raises(IoError):
            read_column_file(src)


class TestZipColumns:
    def full_columns(self):
        return {
            Variable.REGION: ["1", "1"],
            Variable.MILIEU: ["1", "1"],
            Variable.CLUSTER: ["1", "1"],
            Variable.HOUSEHOLD: ["1", "1"],
            Variable.AGE: ["30", "7"],
            Variable.GENDER: ["1", "2"],
            Variable.POSWRCHIEF: ["1", "2"],
        }

    def test_alignment(self):
        records = zip_columns(self.full_columns())
        assert len(records) == 2
        assert records[0].age_raw == "30"
        assert records[1].gender_raw == "2"
        assert records[0].income_raw is None

    def test_income_column_optional(self):
        columns = self.full_columns()
        columns[Variable.INCOME] = ["A", "B"]
        records = zip_columns(columns)
        assert [r.income_raw for r in records] == ["A", "B"]

    def test_length_mismatch_names_the_variable(self):
        columns = self.full_columns()
        columns[Variable.AGE] = ["30"]
        with pytest.raises(LengthMismatchError) as exc:
            zip_columns(columns)
        assert "age" in exc.value.message
        assert exc.value.expected == 2
        assert exc.value.actual == 1

    def test_missing_required_variable(self):
        columns = self.full_columns()
        del columns[Variable.GENDER]
        with pytest.raises(ConfigError):
            zip_columns(columns)


def test_read_column_sources_rejects_duplicate_variable(tmp_path):
    (tmp_path / "a.txt").write_text("1\n", encoding="utf-8")
    sources = [
        ColumnSource(tmp_path / "a.txt", Variable.REGION),
        ColumnSource(tmp_path / "a.txt", Variable.REGION),
    ]
    with pytest.raises(ConfigError):
        read_column_sources(sources)


class TestReadTable:
    def write(self, tmp_path, text, delimiter=","):
        path = tmp_path / "persons.csv"
        path.write_text(text, encoding="utf-8")
        column_map = {
            Variable.REGION: "region",
            Variable.MILIEU: "milieu",
            Variable.CLUSTER: "cluster",
            Variable.HOUSEHOLD: "household",
            Variable.AGE: "age",
            Variable.GENDER: "gender",
            Variable.POSWRCHIEF: "poswrchief",
        }
        return TableSource(path, column_map, delimiter=delimiter)

    HEADER = "region,milieu,cluster,household,age,gender,poswrchief\n"

    def test_basic(self, tmp_path):
        src = self.write(tmp_path, self.HEADER + "1,1,1,1,30,1,1\n1,1,1,1,7,2,2\n")
        records = read_table(src)
        assert len(records) == 2
        assert records[1].age_raw == "7"

    def test_extra_columns_ignored(self, tmp_path):
        src = self.write(
            tmp_path,
            "region,milieu,cluster,household,age,gender,poswrchief,junk\n"
            "1,1,1,1,30,1,1,zzz\n",
        )
        assert read_table(src)[0].region == "1"

    def test_quoted_cells(self, tmp_path):
        src = self.write(tmp_path, self.HEADER + '"1",1,1,1,"30",1,"1"\n')
        record = read_table(src)[0]
        assert record.region == "1"
        assert record.poswrchief_raw == "1"

    def test_semicolon_delimiter(self, tmp_path):
        src = self.write(
            tmp_path,
            self.HEADER.replace(",", ";") + "1;1;1;1;30;1;1\n",
            delimiter=";",
        )
        assert read_table(src)[0].age_raw == "30"

    def test_missing_column(self, tmp_path):
        src = self.write(tmp_path, "region,milieu,cluster,household,age,gender\n1,1,1,1,30,1\n")
        with pytest.raises(MissingColumnError) as exc:
            read_table(src)
        assert "poswrchief" in exc.value.message

    def test_row_arity_mismatch_locates_line(self, tmp_path):
        src = self.write(tmp_path, self.HEADER + "1,1,1,1,30,1,1\n1,1,1\n")
        with pytest.raises(RowArityMismatchError) as exc:
            read_table(src)
        assert exc.value.line == 3

    def test_no_data_rows(self, tmp_path):
        src = self.write(tmp_path, self.HEADER)
        with pytest.raises(EmptyFileError):
            read_table(src)

    def test_skip_header_lines_before_real_header(self, tmp_path):
        src = self.write(tmp_path, "export 2026\n" + self.HEADER + "1,1,1,1,30,1,1\n")
        assert read_table(src, skip_header=1)[0].age_raw == "30"


class TestParseAge:
    def test_years_integer_and_fraction(self):
        assert parse_age("30", AgeEncoding.YEARS) == Age(30.0)
        assert parse_age("0.5", AgeEncoding.YEARS) == Age(0.5)
        assert parse_age(" 15 ", AgeEncoding.YEARS) == Age(15.0)

    @pytest.mark.parametrize("token", ["", "abc", "12ans", "-3", "nan", "inf", "-inf"])
    def test_years_rejects_junk(self, token):
        with pytest.raises(BadAgeTokenError):
            parse_age(token, AgeEncoding.YEARS)

    def test_unknown_age_code_paper_compat(self):
        age = parse_age("99", AgeEncoding.YEARS)
        assert age == Age(99.0) and not age.missing

    def test_unknown_age_code_strict(self):
        age = parse_age("99", AgeEncoding.YEARS, MissingAgePolicy.STRICT)
        assert age.missing and age.value == 99.0
        # the reserved code is years-specific
        assert not parse_age("99", AgeEncoding.FIVE_YEAR_CLASSES,
                             MissingAgePolicy.STRICT).missing

    def test_classes_integer_only(self):
        assert parse_age("4", AgeEncoding.FIVE_YEAR_CLASSES) == Age(4.0)
        for token in ["0", "-1", "3.5", "x"]:
            with pytest.raises(BadAgeTokenError):
                parse_age(token, AgeEncoding.FIVE_YEAR_CLASSES)

    @given(st.floats(min_value=0, max_value=150, allow_nan=False, allow_infinity=False))
    def test_years_accepts_any_printable_nonnegative(self, value):
        assert parse_age(str(value), AgeEncoding.YEARS).value == value


class TestParseGender:
    def test_male0_female1(self):
        enc = GenderEncoding.MALE0_FEMALE1
        assert parse_gender("0", enc) is Gender.MALE
        assert parse_gender(" 1 ", enc) is Gender.FEMALE
        with pytest.raises(BadGenderTokenError):
            parse_gender("2", enc)

    def test_male1_female2(self):
        enc = GenderEncoding.MALE1_FEMALE2
        assert parse_gender("1", enc) is Gender.MALE
        assert parse_gender("2", enc) is Gender.FEMALE
        with pytest.raises(BadGenderTokenError):
            parse_gender("0", enc)

    @pytest.mark.parametrize("token", ["", "M", "male", "1.0"])
    def test_junk_tokens(self, token):
        with pytest.raises(BadGenderTokenError):
            parse_gender(token, GenderEncoding.MALE1_FEMALE2)
