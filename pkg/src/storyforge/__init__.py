"""Storyforge: guided multimodal story generation for children.

Turns a five-phase, card-based narrative brief into a moderated story
package (text, narration, per-paragraph music and animation) through
pluggable generative backends, and ships the evaluation statistics used
to compare backends (pairwise win rates, criterion means, moderation
false-positive rate).
"""

__version__ = "0.1.0"
