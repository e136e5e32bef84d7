"""Acceptance suite: one test per release criterion, at pinned tolerances.

Each test prints a PASS/FAIL line for its criterion (run with -s to see
them live). The two data-dependent criteria (rate-table and mean
reproduction) require the released human-evaluation data,
which is not reachable from this environment; per their stated fallback
they are covered by the hand-enumerated fixtures below, plus exact
reconstructions from known unit counts.
"""

import json
import random
import string
import time
from contextlib import contextmanager

import pytest
from fastapi.testclient import TestClient

from storyforge.errors import GenerationError, UnsafeContentError
from storyforge.evalharness import (
    Granularity,
    ModerationRecord,
    ScoreRecord,
    criterion_means,
    false_positive_rate,
    pairwise_rates,
)
from storyforge.narrative import AnimationStyle, brief_to_dict
from storyforge.pipeline import (
    Pipeline,
    direct_scene,
    manifest_to_bytes,
    moderation_loop,
    parse_review_output,
    StoryDraft,
)
from storyforge.service import STATE_ORDER, ServiceConfig, StoryService, create_app
from storyforge.store import digest_of
from support import (
    RecordingTransport,
    build_agents,
    sample_brief,
    scripted_reviewer_hook,
)
from test_review_parsing import PARSE_FAIL, PARSE_OK


@contextmanager
def criterion(name: str):
    try:
        yield
    except BaseException:
        print(f"[acceptance] FAIL  {name}")
        raise
    print(f"[acceptance] PASS  {name}")


# --------------------------------------------------------------------------
# Criterion: pipeline end-to-end on mock backends


def test_pipeline_end_to_end_mock_backends():
    with criterion("pipeline end-to-end (mock backends)"):
        brief = sample_brief(AnimationStyle.ANIMATED)

        started = time.monotonic()
        agents_a, store_a = build_agents(seed=0)
        package_a = Pipeline(agents_a).run(brief)
        agents_b, store_b = build_agents(seed=0)
        package_b = Pipeline(agents_b).run(brief)
        elapsed = time.monotonic() - started

        # package shape
        assert package_a.verdict_history[-1].is_appropriate is True
        assert len(package_a.segments) == 5
        asset_ids = [package_a.narration.payload_ref]
        asset_ids += [seg.video.payload_ref for seg in package_a.segments]
        asset_ids += [seg.music.payload_ref for seg in package_a.segments]
        assert len(asset_ids) == 11  # 1 narration + 5 videos + 5 music

        # referential integrity: every asset in the manifest is fetchable
        # and its payload digest matches its id
        manifest = package_a.manifest
        manifest_assets = [manifest["narration"]["asset_id"]]
        for segment in manifest["segments"]:
            manifest_assets.append(segment["video_asset"]["asset_id"])
            manifest_assets.append(segment["music_asset"]["asset_id"])
        assert sorted(manifest_assets) == sorted(asset_ids)
        for asset_id in manifest_assets:
            assert digest_of(store_a.get(asset_id)) == asset_id

        # determinism: same brief, seed, and config -> byte-identical manifests
        assert manifest_to_bytes(package_a.manifest) == manifest_to_bytes(package_b.manifest)

        assert elapsed < 10.0, f"end-to-end runs took {elapsed:.2f}s"


# --------------------------------------------------------------------------
# Criterion: moderation loop on scripted verdict sequences


def _count_update_calls(transport: RecordingTransport) -> int:
    return sum(
        1
        for path, payload in transport.requests
        if path == "/generate/text" and "child-friendly" in payload["system_prompt"]
    )


def test_moderation_loop_scripted_sequences():
    with criterion("moderation loop scripted sequences"):
        draft = StoryDraft(paragraphs=("A tale.", "It grew.", "It ended."))

        transport = RecordingTransport(text_hook=scripted_reviewer_hook([True]))
        agents, _ = build_agents(transport)
        story, history = moderation_loop(agents, draft, max_rounds=3)
        assert len(history) == 1 and story.revision == 0
        assert _count_update_calls(transport) == 0

        transport = RecordingTransport(text_hook=scripted_reviewer_hook([False, True]))
        agents, _ = build_agents(transport)
        story, history = moderation_loop(agents, draft, max_rounds=3)
        assert len(history) == 2 and story.revision == 1
        assert _count_update_calls(transport) == 1

        transport = RecordingTransport(text_hook=scripted_reviewer_hook([False, False, False]))
        agents, _ = build_agents(transport)
        with pytest.raises(UnsafeContentError) as err:
            moderation_loop(agents, draft, max_rounds=3)
        assert len(err.value.history) == 3
        assert [v.is_appropriate for v in err.value.history] == [False, False, False]
        assert _count_update_calls(transport) == 2

        # through the full pipeline the same failure produces no manifest
        transport = RecordingTransport(text_hook=scripted_reviewer_hook([False] * 3))
        agents, _ = build_agents(transport)
        from storyforge.errors import PipelineStageError

        with pytest.raises(PipelineStageError) as err:
            Pipeline(agents).run(sample_brief())
        assert isinstance(err.value.cause, UnsafeContentError)


# --------------------------------------------------------------------------
# Criterion: scene-prefix invariant under fuzzed paragraphs


def _fuzz_paragraph(rng: random.Random) -> str:
    words = []
    for _ in range(rng.randint(3, 40)):
        length = rng.randint(1, 12)
        words.append("".join(rng.choice(string.ascii_letters) for _ in range(length)))
        if rng.random() < 0.15:
            words.append(rng.choice(["the", "a", "and", "7", "dragon!", "…", "mill,"]))
    return " ".join(words) + rng.choice([".", "!", "?"])


def test_scene_prefix_invariant_fuzzed():
    with criterion("scene-prefix invariant (100 paragraphs x 3 styles)"):
        rng = random.Random(424242)
        paragraphs = [_fuzz_paragraph(rng) for _ in range(100)]
        agents, _ = build_agents()
        for style in AnimationStyle:
            prefix = f"In a {style.value} world,"
            for paragraph in paragraphs:
                guide = direct_scene(agents, paragraph, style, [])
                assert guide.prompt.startswith(prefix)

        # a violating completion triggers exactly one re-ask ...
        replies = ["missing prefix", "In a cartoon world, a fox walks."]

        def one_bad(payload):
            if "text-to-video" in payload["system_prompt"]:
                return replies.pop(0)
            return None

        transport = RecordingTransport(text_hook=one_bad)
        agents, _ = build_agents(transport)
        guide = direct_scene(agents, "A fox.", AnimationStyle.CARTOON, [])
        assert guide.prompt.startswith("In a cartoon world,")
        assert len(transport.requests) == 2

        # ... and a persistent violation errors after that single re-ask
        calls = {"n": 0}

        def always_bad(payload):
            if "text-to-video" in payload["system_prompt"]:
                calls["n"] += 1
                return "never compliant"
            return None

        agents, _ = build_agents(RecordingTransport(text_hook=always_bad))
        with pytest.raises(GenerationError):
            direct_scene(agents, "A fox.", AnimationStyle.CARTOON, [])
        assert calls["n"] == 2


# --------------------------------------------------------------------------
# Criterion: pairwise algebra on 1,000 randomized fixtures


def test_pairwise_algebra_on_1000_random_fixtures():
    with criterion("pairwise algebra (1,000 randomized fixtures)"):
        rng = random.Random(31337)
        for fixture_number in range(1000):
            items = [f"i{n}" for n in range(rng.randint(1, 5))]
            raters = [f"r{n}" for n in range(rng.randint(1, 4))]
            criteria = [f"c{n}" for n in range(rng.randint(1, 4))]
            records = [
                ScoreRecord(item, rater, subject, criterion_name, rng.randint(0, 2))
                for subject in ("a", "b")
                for item in items
                for rater in raters
                for criterion_name in criteria
            ]
            granularity = rng.choice(list(Granularity))
            forward = pairwise_rates(records, "a", "b", granularity)
            backward = pairwise_rates(records, "b", "a", granularity)

            # exact, pre-rounding identities on the unit counts
            assert forward.win_units == backward.loss_units
            assert forward.loss_units == backward.win_units
            assert forward.tie_units == backward.tie_units
            expected_total = len(items) * len(raters) * (
                len(criteria) if granularity is Granularity.PER_CRITERION else 1
            )
            assert forward.total_units == expected_total
            assert (
                forward.win_units + forward.tie_units + forward.loss_units == expected_total
            )

            self_rates = pairwise_rates(records, "a", "a", granularity)
            assert (self_rates.win, self_rates.tie, self_rates.loss) == (0.0, 100.0, 0.0)
            assert self_rates.win_units == 0 and self_rates.loss_units == 0


# --------------------------------------------------------------------------
# Criterion: rate tables from hand-enumerated fixtures
# (The released score data is unreachable from this environment, so this
# criterion runs on its stated fallback: the derived fixtures, plus exact
# reconstructions from known unit counts.)


def test_rate_tables_from_hand_enumerated_fixtures():
    with criterion("rate tables (hand-enumerated fixtures)"):
        # 2 items x 1 rater x 2 criteria, a=(2,1) b=(1,1) per item:
        # per-criterion units = 4 -> 2 wins + 2 ties = 50.00/50.00/0.00
        records = []
        for item in ("i1", "i2"):
            records.append(ScoreRecord(item, "r1", "a", "c1", 2))
            records.append(ScoreRecord(item, "r1", "a", "c2", 1))
            records.append(ScoreRecord(item, "r1", "b", "c1", 1))
            records.append(ScoreRecord(item, "r1", "b", "c2", 1))
        rates = pairwise_rates(records, "a", "b", Granularity.PER_CRITERION)
        assert (rates.win, rates.tie, rates.loss) == (50.0, 50.0, 0.0)

        # reconstruction from known counts: 119/104/77 of 300 units
        rows = []
        for unit, (a_score, b_score) in enumerate(
            [(2, 1)] * 119 + [(1, 1)] * 104 + [(0, 2)] * 77
        ):
            rows.append(ScoreRecord(f"i{unit}", "r", "a", "c", a_score))
            rows.append(ScoreRecord(f"i{unit}", "r", "b", "c", b_score))
        rates = pairwise_rates(rows, "a", "b", Granularity.PER_RATER_TOTAL)
        assert (rates.win, rates.tie, rates.loss) == (39.67, 34.67, 25.67)

        # moderation FPR: 4 truly inappropriate, 2 let through -> 50.00
        moderation = [
            ModerationRecord("s1", "gutenberg", "inappropriate", "appropriate"),
            ModerationRecord("s2", "gutenberg", "inappropriate", "appropriate"),
            ModerationRecord("s3", "gutenberg", "inappropriate", "inappropriate"),
            ModerationRecord("s4", "gutenberg", "inappropriate", "inappropriate"),
            ModerationRecord("s5", "gutenberg", "appropriate", "appropriate"),
        ]
        assert false_positive_rate(moderation, "gutenberg") == 50.0

        # reconstruction from known counts: 9 of 100 let through -> 9.00,
        # and a second source with none let through -> 0.00
        rows = [
            ModerationRecord(f"g{n}", "gutenberg", "inappropriate",
                             "appropriate" if n < 9 else "inappropriate")
            for n in range(100)
        ]
        rows += [
            ModerationRecord(f"s{n}", "synthetic", "inappropriate", "inappropriate")
            for n in range(8)
        ]
        assert false_positive_rate(rows, "gutenberg") == 9.0
        assert false_positive_rate(rows, "synthetic") == 0.0


# --------------------------------------------------------------------------
# Criterion: criterion means on fixed fixtures


def test_criterion_means_fixtures():
    with criterion("criterion means fixtures"):
        all_twos = [
            ScoreRecord(f"i{n}", f"r{m}", "model", criterion_name, 2)
            for n in range(10)
            for m in range(3)
            for criterion_name in ("Grammar", "Creativity", "Naturalness")
        ]
        means = criterion_means(all_twos, "model")
        assert means == {"Grammar": 2.0, "Creativity": 2.0, "Naturalness": 2.0}

        one_each = [
            ScoreRecord("i1", "r1", "model", "Grammar", 0),
            ScoreRecord("i2", "r1", "model", "Grammar", 1),
            ScoreRecord("i3", "r1", "model", "Grammar", 2),
        ]
        assert criterion_means(one_each, "model") == {"Grammar": 1.0}

        # reconstruction from known counts: 288 twos + 12 ones over 300
        # measurements -> 588/300 = 1.96, within the 0.005 tolerance exactly
        grid = [(f"i{n}", f"r{m}") for n in range(50) for m in range(6)]
        reconstructed = [
            ScoreRecord(item, rater, "model", "Grammar", 1 if index < 12 else 2)
            for index, (item, rater) in enumerate(grid)
        ]
        mean = criterion_means(reconstructed, "model")["Grammar"]
        assert abs(mean - 1.96) <= 0.005


# --------------------------------------------------------------------------
# Criterion: verdict parser corpus


def test_verdict_parser_corpus_agreement():
    with criterion("verdict parser corpus (>= 20 labeled fixtures)"):
        assert len(PARSE_OK) + len(PARSE_FAIL) >= 20
        for raw, expected_reasoning, expected_flag in PARSE_OK:
            verdict = parse_review_output(raw)
            assert verdict.reasoning == expected_reasoning
            assert verdict.is_appropriate is expected_flag
        for raw in PARSE_FAIL:
            from storyforge.errors import ReviewParseError

            with pytest.raises(ReviewParseError):
                parse_review_output(raw)


# --------------------------------------------------------------------------
# Criterion: service integrity under 20 concurrent jobs


def _varied_brief(index: int):
    import dataclasses

    from storyforge.narrative import CardAnswer, PhaseInput

    brief = sample_brief()
    first = brief.phase_inputs[0]
    card = first.cards[0]
    varied_card = CardAnswer(card.function_id, (f"Variation {index}: {card.answers[0]}",))
    varied_first = PhaseInput(phase=first.phase, cards=(varied_card,))
    return dataclasses.replace(brief, phase_inputs=(varied_first,) + brief.phase_inputs[1:])


def test_service_integrity_under_concurrent_jobs(tmp_path):
    with criterion("service integrity (20 concurrent mock jobs)"):
        service = StoryService(ServiceConfig(data_dir=tmp_path / "data", workers=4))
        try:
            with TestClient(create_app(service)) as client:
                job_ids = []
                for index in range(20):
                    payload = {"brief": brief_to_dict(_varied_brief(index))}
                    response = client.post("/jobs", json=payload)
                    assert response.status_code == 202
                    job_ids.append(response.json()["id"])

                deadline = time.monotonic() + 60
                finals = {}
                while len(finals) < len(job_ids) and time.monotonic() < deadline:
                    for job_id in job_ids:
                        if job_id in finals:
                            continue
                        job = client.get(f"/jobs/{job_id}").json()
                        if job["state"] in ("done", "failed"):
                            finals[job_id] = job
                    time.sleep(0.05)
                assert len(finals) == len(job_ids), "jobs did not finish in time"

                for job in finals.values():
                    assert job["state"] == "done", job.get("error")
                    # no backward transitions anywhere in the history
                    indices = [STATE_ORDER.index(s) for s in job["state_history"]]
                    assert indices == sorted(indices)

                    manifest_response = client.get(f"/artifacts/{job['package_ref']}")
                    assert manifest_response.status_code == 200
                    manifest = json.loads(manifest_response.content)
                    asset_ids = [manifest["narration"]["asset_id"]]
                    for segment in manifest["segments"]:
                        asset_ids.append(segment["video_asset"]["asset_id"])
                        asset_ids.append(segment["music_asset"]["asset_id"])
                    assert len(asset_ids) == 11
                    for asset_id in asset_ids:
                        fetched = client.get(f"/artifacts/{asset_id}")
                        assert fetched.status_code == 200
                        assert digest_of(fetched.content) == asset_id
        finally:
            service.close()
