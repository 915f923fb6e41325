import json
from pathlib import Path

import pytest
from hypothesis import given, strategies as st

from videofoley.catalog import (
    Category,
    catalog_to_manifest,
    labels_by_category,
    load_manifest,
    select_clip,
)
from videofoley.errors import InputError


def write_manifest(tmp_path: Path, labels, clips) -> Path:
    for clip in clips:
        clip_file = tmp_path / clip["path"]
        clip_file.parent.mkdir(parents=True, exist_ok=True)
        clip_file.write_bytes(b"RIFF")
    manifest = tmp_path / "catalog.json"
    manifest.write_text(json.dumps({"labels": labels, "clips": clips}))
    return manifest


def clip_entry(label_id, path, duration, rate=48000, channels=1):
    return {
        "label_id": label_id,
        "path": path,
        "duration_s": duration,
        "sample_rate": rate,
        "channels": channels,
    }


BICYCLE = {"id": "bicycle", "text": "bicycle", "category": "effects"}
STREET = {"id": "street", "text": "street noise", "category": "ambients"}


def test_minimal_manifest(tmp_path):
    manifest = write_manifest(tmp_path, [BICYCLE], [clip_entry("bicycle", "a.wav", 7.0)])
    catalog = load_manifest(manifest)
    assert len(catalog.labels) == 1
    assert len(catalog.clips) == 1
    assert catalog.clips[0].duration_s == 7.0
    assert catalog.clips[0].path == tmp_path / "a.wav"


def test_unresolved_label(tmp_path):
    manifest = write_manifest(tmp_path, [BICYCLE], [clip_entry("ghost", "a.wav", 1.0)])
    with pytest.raises(InputError, match="unresolved label"):
        load_manifest(manifest)


def test_duplicate_id(tmp_path):
    manifest = write_manifest(
        tmp_path, [BICYCLE, BICYCLE], [clip_entry("bicycle", "a.wav", 1.0)]
    )
    with pytest.raises(InputError, match="duplicate label id"):
        load_manifest(manifest)


def test_label_without_clips(tmp_path):
    manifest = write_manifest(tmp_path, [BICYCLE, STREET], [clip_entry("bicycle", "a.wav", 1.0)])
    with pytest.raises(InputError, match="has no clips"):
        load_manifest(manifest)


def test_missing_file(tmp_path):
    with pytest.raises(InputError, match="not found"):
        load_manifest(tmp_path / "nope.json")


def test_bad_category_reports_index(tmp_path):
    manifest = write_manifest(
        tmp_path,
        [{"id": "x", "text": "x", "category": "misc"}],
        [],
    )
    with pytest.raises(InputError, match=r"labels\[0\]"):
        load_manifest(manifest)


def test_54_category_fixture(tmp_path):
    # the oracle is the generation loop itself: counts are known by construction
    labels = []
    clips = []
    expected = {"effects": 0, "ambients": 0}
    for i in range(54):
        category = "effects" if i % 2 == 0 else "ambients"
        expected[category] += 1
        labels.append({"id": f"cat{i:02d}", "text": f"category {i}", "category": category})
        clips.append(clip_entry(f"cat{i:02d}", f"clips/{i}.wav", 1.0 + i))
    manifest = write_manifest(tmp_path, labels, clips)
    catalog = load_manifest(manifest)
    assert len(catalog.labels) == 54
    assert len(labels_by_category(catalog, Category.EFFECTS)) == expected["effects"]
    assert len(labels_by_category(catalog, Category.AMBIENTS)) == expected["ambients"]


@pytest.fixture
def two_label_catalog(tmp_path):
    manifest = write_manifest(
        tmp_path,
        [BICYCLE, STREET],
        [clip_entry("bicycle", "a.wav", 2.0), clip_entry("street", "b.wav", 3.0)],
    )
    return load_manifest(manifest)


def test_labels_by_category(two_label_catalog):
    assert [l.id for l in labels_by_category(two_label_catalog, Category.EFFECTS)] == ["bicycle"]
    assert [l.id for l in labels_by_category(two_label_catalog, Category.AMBIENTS)] == ["street"]


def test_labels_by_category_partition(two_label_catalog):
    effects = labels_by_category(two_label_catalog, Category.EFFECTS)
    ambients = labels_by_category(two_label_catalog, Category.AMBIENTS)
    assert {l.id for l in effects} | {l.id for l in ambients} == {l.id for l in two_label_catalog.labels}
    assert not ({l.id for l in effects} & {l.id for l in ambients})


@pytest.fixture
def duration_catalog(tmp_path):
    clips = [
        clip_entry("bicycle", "c3.wav", 3.0),
        clip_entry("bicycle", "c7.wav", 7.0),
        clip_entry("bicycle", "c12.wav", 12.0),
    ]
    return load_manifest(write_manifest(tmp_path, [BICYCLE], clips))


def test_select_clip_shortest_sufficient(duration_catalog):
    assert select_clip(duration_catalog, "bicycle", 5.0).duration_s == 7.0


def test_select_clip_falls_back_to_longest(duration_catalog):
    assert select_clip(duration_catalog, "bicycle", 15.0).duration_s == 12.0


def test_select_clip_boundary_equal(tmp_path):
    catalog = load_manifest(write_manifest(tmp_path, [BICYCLE], [clip_entry("bicycle", "a.wav", 3.0)]))
    assert select_clip(catalog, "bicycle", 3.0).duration_s == 3.0


def test_select_clip_unknown_label(duration_catalog):
    with pytest.raises(InputError, match="unknown label"):
        select_clip(duration_catalog, "nope", 1.0)


@given(
    durations=st.lists(st.floats(0.1, 60.0), min_size=1, max_size=8),
    required=st.floats(0.0, 70.0),
)
def test_select_clip_matches_bruteforce(tmp_path_factory, durations, required):
    tmp_path = tmp_path_factory.mktemp("cat")
    clips = [clip_entry("bicycle", f"c{i}.wav", d) for i, d in enumerate(durations)]
    catalog = load_manifest(write_manifest(tmp_path, [BICYCLE], clips))

    chosen = select_clip(catalog, "bicycle", required)
    sufficient = [d for d in durations if d >= required]
    if sufficient:
        assert chosen.duration_s == min(sufficient)
        assert chosen.duration_s >= required
        # manifest-order tie break: first clip with that duration
        assert chosen.path.name == f"c{durations.index(chosen.duration_s)}.wav"
    else:
        assert chosen.duration_s == max(durations)
        assert chosen.path.name == f"c{durations.index(chosen.duration_s)}.wav"


def test_manifest_roundtrip(tmp_path, two_label_catalog):
    doc = catalog_to_manifest(two_label_catalog, tmp_path)
    second = tmp_path / "again.json"
    second.write_text(json.dumps(doc))
    reloaded = load_manifest(second)
    assert reloaded.labels == two_label_catalog.labels
    assert [c.duration_s for c in reloaded.clips] == [c.duration_s for c in two_label_catalog.clips]
    assert catalog_to_manifest(reloaded, tmp_path) == doc
