import json
import math

import numpy as np
import pytest

from videofoley.embed import FixtureEmbedder, PromptedEmbedder, cosine, normalize, scene_embedding
from videofoley.errors import BackendError
from videofoley.synthetic import solid

from helpers import ArrayEmbedder, make_frame, random_unit, unit


@pytest.fixture
def fixture_embedder(tmp_path):
    doc = {
        "dimension": 4,
        "images": {"circle_left": [2.0, 0.0, 0.0, 0.0], "circle_right": [0.0, 3.0, 0.0, 0.0]},
        "texts": {"bicycle": [0.0, 0.0, 5.0, 0.0], "a photo of bicycle": [0.0, 0.0, 0.0, 1.0]},
    }
    path = tmp_path / "emb.json"
    path.write_text(json.dumps(doc))
    return FixtureEmbedder(path)


def test_fixture_image_renormalized(fixture_embedder):
    vec = fixture_embedder.embed_image(make_frame(solid(2, 2, (0, 0, 0)), key="circle_left"))
    assert np.allclose(vec, [1.0, 0.0, 0.0, 0.0])
    assert np.linalg.norm(vec) == pytest.approx(1.0, abs=1e-6)


def test_fixture_unknown_frame_key(fixture_embedder):
    with pytest.raises(BackendError, match="no fixture embedding"):
        fixture_embedder.embed_image(make_frame(solid(2, 2, (0, 0, 0))))


def test_fixture_text_lookup(fixture_embedder):
    assert np.allclose(fixture_embedder.embed_text("bicycle"), [0, 0, 1, 0])


def test_empty_text_rejected(fixture_embedder):
    with pytest.raises(ValueError, match="empty label"):
        fixture_embedder.embed_text("")


def test_text_determinism(fixture_embedder):
    a = fixture_embedder.embed_text("bicycle")
    b = fixture_embedder.embed_text("bicycle")
    assert np.array_equal(a, b)


def test_fixture_dimension_mismatch(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"dimension": 3, "texts": {"x": [1.0, 0.0]}}))
    with pytest.raises(BackendError, match="dimension"):
        FixtureEmbedder(path)


def test_prompt_template(fixture_embedder):
    prompted = PromptedEmbedder(fixture_embedder, "a photo of {}")
    assert np.allclose(prompted.embed_text("bicycle"), [0, 0, 0, 1])


def test_cosine_identity():
    v = normalize([0.3, 0.4, 0.5])
    assert cosine(v, v) == pytest.approx(1.0)


def test_cosine_orthogonal():
    assert cosine(unit(3, 0), unit(3, 1)) == 0.0


def test_cosine_hand_value():
    assert cosine(np.array([0.6, 0.8]), np.array([1.0, 0.0])) == pytest.approx(0.6)


def test_cosine_dimension_mismatch():
    with pytest.raises(ValueError, match="dimension mismatch"):
        cosine(unit(3, 0), unit(4, 0))


def test_cosine_properties_random():
    rng = np.random.default_rng(5)
    for _ in range(100):
        a, b = random_unit(rng, 8), random_unit(rng, 8)
        assert cosine(a, b) == pytest.approx(cosine(b, a))
        assert abs(cosine(a, b)) <= 1 + 1e-9
        assert cosine(a, a) == pytest.approx(1.0)


def frames_with_keys(*keys):
    return [make_frame(solid(2, 2, (0, 0, 0)), index=i, key=k) for i, k in enumerate(keys)]


def test_scene_embedding_single_frame():
    embedder = ArrayEmbedder(images={"a": unit(4, 0)})
    [frame] = frames_with_keys("a")
    assert np.array_equal(scene_embedding(embedder, [frame]), embedder.embed_image(frame))


def test_scene_embedding_identical_frames():
    embedder = ArrayEmbedder(images={"a": np.array([1.0, 2.0, 2.0, 0.0])})
    frames = frames_with_keys("a", "a", "a")
    assert np.allclose(scene_embedding(embedder, frames), embedder.embed_image(frames[0]))


def test_scene_embedding_orthogonal_pair():
    embedder = ArrayEmbedder(images={"a": unit(4, 0), "b": unit(4, 1)})
    frames = frames_with_keys("a", "b")
    emb = scene_embedding(embedder, frames)
    assert cosine(emb, unit(4, 0)) == pytest.approx(math.sqrt(2) / 2, abs=1e-9)
    assert cosine(emb, unit(4, 1)) == pytest.approx(math.sqrt(2) / 2, abs=1e-9)


def test_scene_embedding_empty():
    with pytest.raises(ValueError):
        scene_embedding(ArrayEmbedder(images={"a": unit(2, 0)}), [])


def test_scene_embedding_order_invariant():
    rng = np.random.default_rng(6)
    images = {f"k{i}": random_unit(rng, 6) for i in range(5)}
    embedder = ArrayEmbedder(images=images)
    frames = frames_with_keys(*images.keys())
    shuffled = [frames[i] for i in rng.permutation(len(frames))]
    assert np.allclose(scene_embedding(embedder, frames), scene_embedding(embedder, shuffled))


def test_backend_outputs_unit_norm():
    rng = np.random.default_rng(7)
    embedder = ArrayEmbedder(
        images={"a": rng.normal(size=5) * 10},
        texts={"t": rng.normal(size=5) * 0.01},
    )
    assert np.linalg.norm(embedder.embed_image(frames_with_keys("a")[0])) == pytest.approx(1.0, abs=1e-6)
    assert np.linalg.norm(embedder.embed_text("t")) == pytest.approx(1.0, abs=1e-6)
