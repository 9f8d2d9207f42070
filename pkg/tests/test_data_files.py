"""Hygiene checks for the bundled data files.

The synthetic-corpus oracle and the masking safety closure both rest on
gazetteer entries and replacement values being plain capitalized words:
letters and single spaces only, nothing a pattern detector could fire on.
"""
import re

from nightjar.masking import default_value_pool
from nightjar.model import EntityLabel, Tweet
from nightjar.detectors import run_regex_detectors
from nightjar.recognize import default_gazetteer

PLAIN_WORDS = re.compile(r"[A-Za-z]+(?: [A-Za-z]+)*")


def test_gazetteer_entries_are_plain_words():
    gaz = default_gazetteer()
    assert set(gaz.entries) == set(EntityLabel) - {
        EntityLabel.URL, EntityLabel.USERNAME, EntityLabel.PHONE,
        EntityLabel.EMAIL, EntityLabel.ID_NUMBER, EntityLabel.ZIP}
    for label, values in gaz.entries.items():
        assert values, label
        for value in values:
            assert PLAIN_WORDS.fullmatch(value), (label, value)


def test_pool_values_are_plain_and_inert():
    pool = default_value_pool()
    for label, values in pool.entries.items():
        assert values, label
        for value in values:
            assert PLAIN_WORDS.fullmatch(value), (label, value)
            assert run_regex_detectors(Tweet(id="x", text=value)) == []


def test_pool_covers_every_synthetic_label():
    pool = default_value_pool()
    entity_labels = {EntityLabel.PERSON, EntityLabel.ORG, EntityLabel.GROUP,
                     EntityLabel.CITY, EntityLabel.STATE, EntityLabel.COUNTRY,
                     EntityLabel.LOCATION}
    assert entity_labels <= set(pool.entries)
