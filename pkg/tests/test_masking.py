import pytest
from hypothesis import given, settings, strategies as st

from nightjar.detectors import USERNAME_RE, run_regex_detectors
from nightjar.masking import (
    Action,
    ReplacementPolicy,
    ValuePool,
    default_actions,
    default_value_pool,
    mask_tweet,
    resolve_spans,
    synth_value,
    validate_pool,
)
from nightjar.model import (
    ConfigError,
    EntityLabel,
    NightjarError,
    Tweet,
    make_detection,
)

import random

WORKED_SENTENCE = "Shout out to Katie for making this event happen"
# Chosen so the per-tweet stream for tweet id "t1" draws "Brian" for the
# worked sentence's PERSON span.
BRIAN_SEED = 46


def det(text, start, end, label, source="builtin"):
    return make_detection(text, start, end, label, source)


class TestResolveSpans:
    def test_pattern_source_beats_recognizer(self):
        text = "visit example.com/acme now"
        url = det(text, 6, 22, EntityLabel.URL, "regex/url")
        org = det(text, 6, 22, EntityLabel.ORG, "builtin")
        assert resolve_spans([org, url]) == [url]

    def test_longer_span_beats_shorter(self):
        text = "Katie Smith Ltd here"
        person = det(text, 0, 15, EntityLabel.PERSON)
        org = det(text, 6, 11, EntityLabel.ORG)
        assert resolve_spans([org, person]) == [person]

    def test_label_priority_breaks_length_ties(self):
        text = "Georgia here"
        person = det(text, 0, 7, EntityLabel.PERSON)
        state = det(text, 0, 7, EntityLabel.STATE)
        assert resolve_spans([state, person]) == [person]

    def test_disjoint_unchanged(self):
        text = "Katie met Brian"
        a = det(text, 0, 5, EntityLabel.PERSON)
        b = det(text, 10, 15, EntityLabel.PERSON)
        assert resolve_spans([b, a]) == [a, b]


class TestSynthValue:
    def test_singleton_pool(self):
        pool = ValuePool(entries={EntityLabel.PERSON: ("Brian",)})
        value = synth_value(EntityLabel.PERSON, pool, random.Random(0))
        assert value == "Brian"

    def test_username_handle_matches_mention_grammar(self):
        pool = default_value_pool()
        handle = synth_value(EntityLabel.USERNAME, pool, random.Random(3))
        assert USERNAME_RE.fullmatch(handle)

    def test_empty_pool_is_config_error(self):
        pool = ValuePool(entries={})
        with pytest.raises(ConfigError):
            synth_value(EntityLabel.CITY, pool, random.Random(0))

    def test_validate_pool_rejects_missing_label(self):
        pool = ValuePool(entries={EntityLabel.PERSON: ("Brian",)})
        with pytest.raises(ConfigError, match="ORG"):
            validate_pool(pool, ReplacementPolicy())

    def test_validate_pool_rejects_retriggering_value(self):
        entries = {label: ("Safe",) for label in EntityLabel}
        entries[EntityLabel.CITY] = ("call 555-123-4567",)
        with pytest.raises(ConfigError, match="re-trigger"):
            validate_pool(ValuePool(entries=entries), ReplacementPolicy())


class TestMaskTweet:
    def test_worked_example_katie_to_brian(self):
        tweet = Tweet(id="t1", text=WORKED_SENTENCE)
        person = det(WORKED_SENTENCE, 13, 18, EntityLabel.PERSON)
        masked = mask_tweet(tweet, [person],
                            ReplacementPolicy(seed=BRIAN_SEED),
                            default_value_pool())
        assert masked.masked_text == (
            "Shout out to Brian for making this event happen")

    def test_no_detections_identity(self):
        tweet = Tweet(id="1", text="nothing here")
        masked = mask_tweet(tweet, [], ReplacementPolicy())
        assert masked.masked_text == tweet.text
        assert masked.edits == ()

    def test_delete_phone_collapses_whitespace(self):
        text = "call 555-123-4567"
        tweet = Tweet(id="1", text=text)
        actions = default_actions()
        actions[EntityLabel.PHONE] = Action.DELETE
        policy = ReplacementPolicy(actions=actions)
        masked = mask_tweet(tweet, [det(text, 5, 17, EntityLabel.PHONE,
                                        "regex/phone")], policy)
        assert masked.masked_text == "call"

    def test_delete_midsentence_leaves_single_space(self):
        text = "ok 555-123-4567 bye"
        tweet = Tweet(id="1", text=text)
        actions = default_actions()
        actions[EntityLabel.PHONE] = Action.DELETE
        policy = ReplacementPolicy(actions=actions)
        masked = mask_tweet(tweet, [det(text, 3, 15, EntityLabel.PHONE,
                                        "regex/phone")], policy)
        assert masked.masked_text == "ok bye"

    def test_delete_adjacent_detections(self):
        text = "a 123-456-7890 555-123-4567 b"
        tweet = Tweet(id="1", text=text)
        actions = default_actions()
        actions[EntityLabel.PHONE] = Action.DELETE
        policy = ReplacementPolicy(actions=actions)
        dets = [det(text, 2, 14, EntityLabel.PHONE, "regex/phone"),
                det(text, 15, 27, EntityLabel.PHONE, "regex/phone")]
        masked = mask_tweet(tweet, dets, policy)
        assert masked.masked_text == "a b"

    def test_placeholder_policy(self):
        text = "see https://t.co/x1"
        tweet = Tweet(id="1", text=text)
        masked = mask_tweet(tweet, [det(text, 4, 19, EntityLabel.URL,
                                        "regex/url")],
                            ReplacementPolicy())
        assert masked.masked_text == "see <URL>"

    def test_out_of_bounds_names_tweet(self):
        tweet = Tweet(id="tw42", text="short")
        bad = det("long enough text", 0, 12, EntityLabel.URL, "regex/url")
        with pytest.raises(NightjarError, match="tw42"):
            mask_tweet(tweet, [bad], ReplacementPolicy())

    def test_unresolved_overlap_rejected(self):
        text = "Katie Smith"
        tweet = Tweet(id="1", text=text)
        dets = [det(text, 0, 11, EntityLabel.PERSON),
                det(text, 6, 11, EntityLabel.ORG)]
        with pytest.raises(NightjarError, match="resolve"):
            mask_tweet(tweet, dets, ReplacementPolicy())

    def test_within_tweet_consistency(self):
        text = "Katie met Katie"
        tweet = Tweet(id="1", text=text)
        dets = [det(text, 0, 5, EntityLabel.PERSON),
                det(text, 10, 15, EntityLabel.PERSON)]
        masked = mask_tweet(tweet, dets, ReplacementPolicy(seed=5),
                            default_value_pool())
        assert masked.edits[0].replacement == masked.edits[1].replacement

    def test_determinism_and_replay(self):
        text = "Katie at https://t.co/x1 call 555-123-4567"
        tweet = Tweet(id="9", text=text)
        dets = resolve_spans(
            run_regex_detectors(tweet)
            + [det(text, 0, 5, EntityLabel.PERSON)])
        policy = ReplacementPolicy(seed=11)
        a = mask_tweet(tweet, dets, policy)
        b = mask_tweet(tweet, dets, policy)
        assert a == b
        assert a.replay() == a.masked_text

    def test_cross_tweet_consistency_flag(self):
        pool = default_value_pool()
        texts = ["Katie was here", "so Katie again"]
        on = ReplacementPolicy(seed=3, cross_tweet_consistency=True)
        replacements = []
        for i, text in enumerate(texts):
            start = text.index("Katie")
            tweet = Tweet(id=f"t{i}", text=text)
            masked = mask_tweet(
                tweet, [det(text, start, start + 5, EntityLabel.PERSON)],
                on, pool)
            replacements.append(masked.edits[0].replacement)
        assert replacements[0] == replacements[1]


class TestFixedPointClosure:
    def test_masking_can_make_a_zip_cue_adjacent(self):
        # "<ID>" reads as the word ID, a state abbreviation, so masking the
        # ID token turns the uncued 90210 into a cued ZIP; the residual
        # pass must catch it.
        text = "ref A1B2C3D4 90210 ok"
        tweet = Tweet(id="1", text=text)
        dets = resolve_spans(run_regex_detectors(tweet))
        assert [d.label for d in dets] == [EntityLabel.ID_NUMBER]
        masked = mask_tweet(tweet, dets, ReplacementPolicy(),
                            default_value_pool())
        assert masked.masked_text == "ref <ID> <ZIP> ok"
        assert [e.label for e in masked.edits] == [
            EntityLabel.ID_NUMBER, EntityLabel.ZIP]
        assert run_regex_detectors(
            Tweet(id="x", text=masked.masked_text)) == []
        assert masked.replay() == masked.masked_text

    def test_deletion_juxtaposition_is_closed_by_pieces(self):
        # Deleting the URL merges two digit runs into a phone shape; the
        # residual maps back as two pieces, one per untouched segment.
        text = "a 123456 https://t.co/x1 7890 b"
        tweet = Tweet(id="1", text=text)
        actions = {label: Action.DELETE for label in EntityLabel}
        policy = ReplacementPolicy(actions=actions)
        masked = mask_tweet(tweet, resolve_spans(run_regex_detectors(tweet)),
                            policy)
        assert masked.masked_text == "a b"
        assert run_regex_detectors(
            Tweet(id="x", text=masked.masked_text)) == []
        assert masked.replay() == masked.masked_text

    def test_synthetic_handles_terminate_and_stay(self):
        # Mention-shaped replacements are the policy's own output: the
        # residual pass leaves them alone rather than looping.
        text = "ping @someone now"
        tweet = Tweet(id="1", text=text)
        actions = default_actions()
        actions[EntityLabel.USERNAME] = Action.SYNTHETIC
        policy = ReplacementPolicy(actions=actions, seed=3)
        masked = mask_tweet(tweet, resolve_spans(run_regex_detectors(tweet)),
                            policy, default_value_pool())
        assert USERNAME_RE.search(masked.masked_text)
        assert masked.replay() == masked.masked_text


def _outside_segments(masked):
    """(original outside chars, masked outside chars) for splice checking."""
    orig_parts, masked_parts = [], []
    orig_cursor = masked_cursor = 0
    for edit in masked.edits:
        orig_parts.append(masked.original_text[orig_cursor:edit.span.start])
        length = edit.span.start - orig_cursor
        masked_parts.append(
            masked.masked_text[masked_cursor:masked_cursor + length])
        masked_cursor += length + len(edit.replacement)
        orig_cursor = edit.span.end
    orig_parts.append(masked.original_text[orig_cursor:])
    masked_parts.append(masked.masked_text[masked_cursor:])
    return "".join(orig_parts), "".join(masked_parts)


@given(st.text(max_size=200), st.integers(min_value=0, max_value=2 ** 32))
@settings(max_examples=120)
def test_default_policy_closure_and_splice(text, seed):
    tweet = Tweet(id="h1", text=text)
    dets = resolve_spans(run_regex_detectors(tweet))
    masked = mask_tweet(tweet, dets, ReplacementPolicy(seed=seed),
                        default_value_pool())
    # Safety closure: the pattern detectors find nothing in masked output.
    assert run_regex_detectors(Tweet(id="h1", text=masked.masked_text)) == []
    # Non-edit characters survive unchanged and in order.
    original_outside, masked_outside = _outside_segments(masked)
    assert original_outside == masked_outside
    assert masked.replay() == masked.masked_text
