import pytest

from verseforge import formats
from verseforge.corpus import MeterLabel, Strophe, Verse, YearBucket
from verseforge.formats import (
    DataFormat,
    FormatError,
    LineAnnotation,
    StropheHeader,
    consistency_check,
)
from conftest import EXAMPLE_BASIC, EXAMPLE_METER_VERSE, EXAMPLE_VERSE_PAR


def test_encode_basic(example_strophe):
    assert formats.encode(example_strophe, DataFormat.BASIC) == EXAMPLE_BASIC


def test_encode_verse_par(example_strophe):
    assert formats.encode(example_strophe, DataFormat.VERSE_PAR) == EXAMPLE_VERSE_PAR


def test_encode_meter_verse(example_strophe):
    assert formats.encode(example_strophe, DataFormat.METER_VERSE) == EXAMPLE_METER_VERSE


@pytest.mark.parametrize("fmt,text", [
    (DataFormat.BASIC, EXAMPLE_BASIC),
    (DataFormat.VERSE_PAR, EXAMPLE_VERSE_PAR),
    (DataFormat.METER_VERSE, EXAMPLE_METER_VERSE),
])
def test_parse_encode_identity(fmt, text, example_strophe):
    parsed = formats.parse(text, fmt)
    assert parsed.verse_texts == [v.text for v in example_strophe.verses]
    assert parsed.header.scheme == "ABAB"
    assert str(parsed.header.year_bucket) == "1900"
    # and re-encoding the parse gives the same bytes
    out = [parsed.header.render(fmt)]
    for ann, verse in parsed.lines:
        out.append(verse if ann is None else ann.prefix(fmt) + verse)
    assert "\n".join(out) == text


def test_round_trip_on_fixture(fixture_strophes):
    for strophe in fixture_strophes[:100]:
        for fmt in DataFormat:
            text = formats.encode(strophe, fmt)
            parsed = formats.parse(text, fmt)
            assert parsed.verse_texts == [v.text for v in strophe.verses]


def test_hash_inside_verse_text_survives():
    verses = [Verse(t, 1 + i % 2, MeterLabel.IAMB) for i, t in enumerate(
        ["zpívá # moře vlny moři", "a duše letí # dávné reje",
         "svítí slunce tiché zoři", "padá # hvězda # do peřeje"])]
    strophe = Strophe.from_verses(verses, 1900)
    for fmt in (DataFormat.VERSE_PAR, DataFormat.METER_VERSE):
        parsed = formats.parse(formats.encode(strophe, fmt), fmt)
        assert parsed.verse_texts == [v.text for v in verses]


def test_meter_verse_header_has_no_meter():
    header = formats.parse(EXAMPLE_METER_VERSE, DataFormat.METER_VERSE).header
    assert header.strophe_meter is None
    with pytest.raises(FormatError, match="needs a strophe meter"):
        StropheHeader("ABAB", YearBucket(1900), None).render(DataFormat.BASIC)


def test_annotation_prefixes():
    ann = LineAnnotation(MeterLabel.TROCHEE, 8, "ání")
    assert ann.prefix(DataFormat.METER_VERSE) == "T # 8 # ání # "
    assert LineAnnotation(None, 9, "oři").prefix(DataFormat.VERSE_PAR) == "9 # oři # "
    with pytest.raises(FormatError):
        ann.prefix(DataFormat.BASIC)


def test_header_tolerates_trailing_separator():
    text = EXAMPLE_METER_VERSE.replace("# ABAB # 1900", "# ABAB # 1900 # #")
    assert formats.parse(text, DataFormat.METER_VERSE).header.scheme == "ABAB"


@pytest.mark.parametrize("breakage,message", [
    (lambda t: t.replace("# ABAB", "ABAB", 1), "start with"),
    (lambda t: t.replace("# ABAB # 1900", "# ABAB # 1900 # J"), "fields"),
    (lambda t: t.replace("ABAB", "AbAB"), "scheme"),
    (lambda t: t.replace("1900", "time of old"), "year"),
    (lambda t: t.replace("J # 9 # oři", "Q # 9 # oři"), "meter"),
    (lambda t: t.replace("J # 9 # oři", "J # devět # oři"), "integer"),
    (lambda t: t.replace("J # 9 # oři", "J # 0 # oři"), "positive"),
    (lambda t: t.replace("J # 9 # oři # ", "J # 9 #  # "), "hint"),
    (lambda t: t + "\nJ # 9 # oři # navíc jeden verš", "expects 4"),
    (lambda t: "\n".join(t.split("\n")[:-1]), "expects 4"),
])
def test_parse_errors(breakage, message):
    with pytest.raises(FormatError, match=message):
        formats.parse(breakage(EXAMPLE_METER_VERSE), DataFormat.METER_VERSE)


def test_parse_error_carries_line_number():
    text = EXAMPLE_METER_VERSE.replace("J # 9 # oří", "J # x # oří")
    with pytest.raises(FormatError, match="line 4"):
        formats.parse(text, DataFormat.METER_VERSE)


def test_basic_verse_count_checked():
    with pytest.raises(FormatError, match="expects 4"):
        formats.parse("# ABAB # 1900 # J\njen jeden verš", DataFormat.BASIC)


def test_consistency_check_flags_mismatches():
    parsed = formats.parse(EXAMPLE_METER_VERSE, DataFormat.METER_VERSE)
    assert all(c.syl_ok and c.end_ok for c in consistency_check(parsed))

    broken = EXAMPLE_METER_VERSE.replace("J # 9 # oři", "J # 8 # oři")
    checks = consistency_check(formats.parse(broken, DataFormat.METER_VERSE))
    assert [c.syl_ok for c in checks] == [False, True, True, True]
    assert checks[0].annotated_syl == 8 and checks[0].actual_syl == 9

    broken = EXAMPLE_METER_VERSE.replace("J # 9 # eje # v ně", "J # 9 # aje # v ně")
    checks = consistency_check(formats.parse(broken, DataFormat.METER_VERSE))
    assert [c.end_ok for c in checks] == [True, False, True, True]
    assert checks[1].actual_hint == "eje"


def test_consistency_check_ignores_hint_case():
    text = EXAMPLE_METER_VERSE.replace("J # 9 # oři", "J # 9 # OŘI")
    checks = consistency_check(formats.parse(text, DataFormat.METER_VERSE))
    assert checks[0].end_ok


def test_consistency_check_requires_annotations():
    parsed = formats.parse(EXAMPLE_BASIC, DataFormat.BASIC)
    with pytest.raises(FormatError):
        consistency_check(parsed)
