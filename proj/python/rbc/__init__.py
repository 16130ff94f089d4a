"""Reconnaissance blind chess: rules, information sets, encodings and weighting."""

from rbc._rbc import (
    HISTORY_CHANNELS,
    PAIR_CHANNELS,
    TURN_CHANNELS,
    Board,
    CheckpointError,
    CorruptRecord,
    Game,
    InconsistentObservation,
    InvalidInput,
    ParseError,
    apply_request,
    encode_board,
    encode_history,
    game_from_json,
    information_set,
    outcome,
    play_game,
    read_games,
    sense,
    sense_scores,
    softmin_weights,
    successor_outcomes,
    weigh,
)

__all__ = [
    "HISTORY_CHANNELS",
    "PAIR_CHANNELS",
    "TURN_CHANNELS",
    "Board",
    "CheckpointError",
    "CorruptRecord",
    "Game",
    "InconsistentObservation",
    "InvalidInput",
    "ParseError",
    "apply_request",
    "encode_board",
    "encode_history",
    "game_from_json",
    "information_set",
    "outcome",
    "play_game",
    "read_games",
    "sense",
    "sense_scores",
    "softmin_weights",
    "successor_outcomes",
    "weigh",
]
