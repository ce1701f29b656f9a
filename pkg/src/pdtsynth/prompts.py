"""Prompt text for the three synthesis methods and two scoring strategies.

Each synthesis prompt is kept separate from the machine-readable format
suffix appended at call time, so run manifests can record both pieces
verbatim. Interpolation slots: ``{product}``, ``{words}``, ``{word}``.
"""

WORD_REVIEW_PROMPT = (
    "For a hypothetical {product}, you will produce hypothetical survey data "
    "that will be comprised of the respondent picking a word from the following "
    "comma separated list that describes their experience with the product, and "
    "then providing an explanation for the word choice. I will give you a "
    "sentiment score between 0.0-1.0 and for that sentiment number, you will "
    "select a word and produce a human like comment. Words: {words}"
)

REVIEW_WORD_PROMPT = (
    "I will give you a sentiment score between 0.0-1.0. For that sentiment "
    "number, you will produce a hypothetical product review for a hypothetical "
    "{product} that matches the sentiment, and then pick a word from the "
    "following comma separated list that best matches the meaning of the "
    "review. Words: {words}"
)

SUPPLY_WORD_PROMPT = (
    "A hypothetical {product} has been described as: {word}. Provide a "
    "sentiment score for the word between 0.00-1.00 (two decimal places) based "
    "on your implicit understanding of sentiment. For the sentiment score, "
    "produce a hypothetical product review that captures that sentiment and is "
    "appropriate for the chosen word. The review doesn't necessarily need to "
    "include the chosen word and should capture the complex nuance of "
    "sentiment produced by a human."
)

# Machine-readable reply formats, appended after the prompt text above and
# recorded separately in the manifest.
WORD_REVIEW_FORMAT = "Respond on one line as: WORD: <word> ||| REVIEW: <review>"
REVIEW_WORD_FORMAT = WORD_REVIEW_FORMAT
SUPPLY_WORD_FORMAT = "Respond on one line as: SCORE: <0.00-1.00> ||| WORD: <word> ||| REVIEW: <review>"

COMPLETE_SCORING_PROMPT = (
    "I will give a word describing a user's experience with a product followed "
    "by a full review. Based on your implicit understanding of sentiment, "
    "provide a sentiment score for the word and review between 0.00-1.00 "
    "inclusive (to two decimal places) where is 0.00 is a completely negative "
    "sentiment and 1.00 is a completely positive sentiment. Include your "
    "confidence in the accuracy of that score (low, medium, high). "
    "Additionally, provide a carefully crafted contextual explanation for the "
    "sentiment score that is related to the meaning of the text. Please "
    "provide your response in a text-based csv format on one line, with "
    "columns for the word, sentiment score, confidence, and explanation. "
    "Please do not provide any other response aside from the csv formatted "
    "data."
)

BASE_ADJUST_SCORING_PROMPT = (
    "I will give a line containing a word choice followed by an explanation "
    "for the choice. For this line, provide a sentiment analysis score for "
    "each word between 0.00-1.00 (to two decimal places) where is 0.00 is a "
    "completely negative sentiment and 1.00 is a completely positive "
    "sentiment, and then an adjusted score for the word based on the "
    "explanation. Include your confidence in the accuracy of that score (low, "
    "medium, high). Additionally, provide a carefully crafted contextual "
    "explanation for the sentiment score that is related to the meaning of the "
    "text. Please provide your response in a text-based csv format on one "
    "line, with columns for the word, original score, adjusted score, "
    "confidence, and explanation. Please do not provide any other response "
    "aside from the csv formatted data."
)

PROMPTS_VERSION = "1"
