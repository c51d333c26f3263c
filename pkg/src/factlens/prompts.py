"""Prompt templates for the three annotation passes.

Each template has a stable id used in cache keys; the article text is
substituted for ``{post}``. ``extract_post`` inverts ``render_prompt`` so
offline providers can recover the article from a rendered prompt.
"""

from __future__ import annotations

CLAIM = "claim"
WHAT_WHY = "what_why"
ENTITIES = "entities"

TEMPLATES: dict[str, str] = {
    CLAIM: (
        "For the given news item, strictly return a list with the most "
        "important sentences highlighting the motivation behind spreading "
        "the fake news covered in the article. The selected sentences should "
        "be the ones that capture the central claim in the fake news. Quote "
        "verbatim: do not add any new sentences on your own. Strictly return "
        "a JSON decodable Python list format. NEWS ARTICLE: {post}."
    ),
    WHAT_WHY: (
        "From the following fact-checking news article, quote full and "
        "complete sentences from within the post answering the what and why "
        "of the 5W based only on the misinformed part and related to the "
        "fake news. It is possible that each W can have multiple sentences. "
        'Return the result in the format {{"what":[], "why":[]}}. Quote '
        "verbatim: do not add any new sentences on your own; do not "
        "paraphrase. Do not focus on how the fact-checking is done. Strictly "
        "return a JSON decodable Python list format. NEWS ARTICLE: {post}."
    ),
    ENTITIES: (
        "List (in python dictionary type eg. {{a: tag_a, b: tag_b}}) the "
        "names of political figures and parties, categorizing each entity "
        "as positive if it helps improve their image, negative if it has "
        "the opposite effect, and neutral if it presents balanced views: "
        "{post}."
    ),
}

TEMPLATE_IDS = tuple(TEMPLATES)


def render_prompt(template_id: str, post: str) -> str:
    return TEMPLATES[template_id].format(post=post)


def _affixes(template_id: str) -> tuple[str, str]:
    prefix, _, suffix = TEMPLATES[template_id].partition("{post}")
    return prefix.replace("{{", "{").replace("}}", "}"), suffix


def extract_post(template_id: str, prompt: str) -> str:
    """Recover the article text from a rendered prompt."""
    prefix, suffix = _affixes(template_id)
    if not prompt.startswith(prefix) or not prompt.endswith(suffix):
        raise ValueError(f"prompt does not match template '{template_id}'")
    return prompt[len(prefix) : len(prompt) - len(suffix)]
