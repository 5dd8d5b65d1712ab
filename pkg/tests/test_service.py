import pytest
from fastapi.testclient import TestClient

from accent_forge.service import create_app

FISHERY_LEXICON = "漁業\tギョギョー\nと\tト\n"


@pytest.fixture()
def client(tmp_path):
    lexicon = tmp_path / "lexicon.tsv"
    lexicon.write_text(FISHERY_LEXICON, encoding="utf-8")
    app = create_app(str(lexicon))
    return TestClient(app)


@pytest.fixture()
def bare_client(monkeypatch):
    monkeypatch.delenv("ACCENT_FORGE_LEXICON", raising=False)
    return TestClient(create_app())


def test_health(client):
    response = client.get("/health")
    assert response.status_code == 200
    assert response.json() == {"status": "ok", "lexicon_entries": 2}


def test_health_without_lexicon(bare_client):
    assert bare_client.get("/health").json() == {"status": "ok", "lexicon_entries": None}


def test_validate(client):
    response = client.post(
        "/validate",
        json={"lines": ["イ[エ]オ#", "セ]ーコ[ー#"]},
    )
    body = response.json()
    assert response.status_code == 200
    assert body["valid"] is False
    assert body["lines"][0]["valid"] is True
    assert body["lines"][1]["valid"] is False
    assert "precedes" in body["lines"][1]["messages"][0]


def test_validate_lenient(client):
    response = client.post(
        "/validate", json={"lines": ["アタ#"], "strict": False}
    )
    body = response.json()
    assert body["valid"] is True
    assert body["lines"][0]["messages"]


def test_convert_pitch(client):
    response = client.post("/convert", json={"lines": ["イ[エ]オ#"], "target": "pitch"})
    assert response.json() == {"lines": ["イ:L エ:H オ:L"]}


def test_convert_encode(client):
    response = client.post("/convert", json={"lines": ["イ[エ]オ#"], "target": "encode"})
    assert response.json() == {"lines": ["イ↑エ↓オ①"]}


def test_convert_error_is_422(client):
    response = client.post("/convert", json={"lines": ["セ]ーコ[ー#"], "target": "phonemes"})
    assert response.status_code == 422
    assert "line 1" in response.json()["detail"]


def test_correct(client):
    response = client.post(
        "/correct",
        json={
            "utterances": [
                {"id": "fishery-1", "transcript": "漁業と", "labels": "漁業と|ギョ]ーギョート#"}
            ]
        },
    )
    body = response.json()
    assert response.status_code == 200
    utterance = body["utterances"][0]
    assert utterance["corrected"] == "漁業と|ギョ]ギョート#"
    assert utterance["status"] == ["corrected"]
    assert body["summary"] == {"corrected": 1}


def test_correct_without_lexicon_is_503(bare_client):
    response = bare_client.post(
        "/correct",
        json={"utterances": [{"id": "u", "labels": "家|ア[タ#"}]},
    )
    assert response.status_code == 503


def test_correct_interchange_stream(client):
    labels = "漁業と∣ギョ↓ーギョート①"
    response = client.post(
        "/correct", json={"utterances": [{"id": "u", "labels": labels}]}
    )
    assert response.json()["utterances"][0]["corrected"] == "漁業と∣ギョ↓ギョート①"


def test_score(client):
    reference = [{"id": "a", "labels": "セ[ーコーシテ]モ#シ[ナ]クテモ#"}]
    system = [{"id": "a", "labels": "セ[ーコーシテ]モ#シ[ナ]クタモ#"}]
    response = client.post(
        "/score", json={"reference": reference, "systems": {"model": system}}
    )
    body = response.json()
    assert response.status_code == 200
    assert body["reports"]["model"]["cer_phonemes"] == pytest.approx(1 / 12)
    assert "model" in body["table"]


def test_score_id_mismatch_is_422(client):
    reference = [{"id": "a", "labels": "ア[タ#"}]
    system = [{"id": "b", "labels": "ア[タ#"}]
    response = client.post(
        "/score", json={"reference": reference, "systems": {"m": system}}
    )
    assert response.status_code == 422


def test_request_shape_validation(client):
    assert client.post("/validate", json={}).status_code == 422
    assert client.post("/convert", json={"lines": [], "target": "nope"}).status_code == 422
