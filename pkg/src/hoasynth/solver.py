"""Zielonka's recursive algorithm for max-even parity games."""

from __future__ import annotations

import sys
from collections import deque
from dataclasses import dataclass, field

from .errors import RecursionDepthExceeded
from .game import Game, Player, build_arena


@dataclass
class Solution:
    win_ctrl: set = field(default_factory=set)
    win_env: set = field(default_factory=set)
    strat_ctrl: dict = field(default_factory=dict)
    strat_env: dict = field(default_factory=dict)

    def winner(self, v) -> Player:
        return Player.CTRL if v in self.win_ctrl else Player.ENV

    def region(self, player):
        return self.win_ctrl if player == Player.CTRL else self.win_env

    def strategy(self, player):
        return self.strat_ctrl if player == Player.CTRL else self.strat_env


def attractor(game: Game, player, target, within=None, preds=None):
    """Vertices of ``within`` from which ``player`` forces a visit to ``target``.

    Returns the attractor and a witness move for every ``player``-owned
    vertex added on top of ``target``.
    """
    if within is None:
        within = set(range(len(game)))
    if preds is None:
        preds = game.predecessors()
    player = Player(player)
    attr = set(target) & within
    strategy = {}
    # opponent vertices: how many successors inside ``within`` still escape
    escapes = {}
    queue = deque(sorted(attr))
    while queue:
        w = queue.popleft()
        for v in preds[w]:
            if v in attr or v not in within:
                continue
            if game.owner[v] == player:
                strategy[v] = next(s for s in game.successors[v] if s in attr)
                attr.add(v)
                queue.append(v)
            else:
                if v not in escapes:
                    escapes[v] = sum(1 for s in game.successors[v] if s in within)
                escapes[v] -= 1
                if escapes[v] == 0:
                    attr.add(v)
                    queue.append(v)
    return attr, strategy


def zielonka(game: Game, max_depth=None) -> Solution:
    """Solve ``game``; the result holds winning regions and positional strategies.

    ``max_depth`` bounds the recursion (default: number of vertices); hitting
    it means the recursion failed to shrink the subgame, which is a bug.
    """
    n = len(game)
    if max_depth is None:
        max_depth = max(n, 1)
    preds = game.predecessors()
    limit = sys.getrecursionlimit()
    if limit < 2 * max_depth + 100:
        sys.setrecursionlimit(2 * max_depth + 100)
    try:
        win, strat = _solve(game, set(range(n)), preds, 0, max_depth)
    finally:
        sys.setrecursionlimit(limit)
    return Solution(win[0], win[1], strat[0], strat[1])


def _solve(game, vertices, preds, depth, max_depth):
    if depth > max_depth:
        raise RecursionDepthExceeded(f"recursion depth {depth} exceeds {max_depth}")
    win = (set(), set())
    strat = ({}, {})
    if not vertices:
        return win, strat

    d = max(game.priority[v] for v in vertices)
    player = Player(d % 2)
    opp = player.opponent
    top = {v for v in vertices if game.priority[v] == d}

    attr, attr_strat = attractor(game, player, top, vertices, preds)
    sub_win, sub_strat = _solve(game, vertices - attr, preds, depth + 1, max_depth)

    if not sub_win[opp]:
        win[player].update(vertices)
        strat[player].update(sub_strat[player])
        strat[player].update(attr_strat)
        for v in sorted(top):
            if game.owner[v] == player:
                strat[player][v] = next(s for s in game.successors[v] if s in vertices)
        return win, strat

    back, back_strat = attractor(game, opp, sub_win[opp], vertices, preds)
    rest_win, rest_strat = _solve(game, vertices - back, preds, depth + 1, max_depth)
    win[player].update(rest_win[player])
    win[opp].update(rest_win[opp], back)
    strat[player].update(rest_strat[player])
    strat[opp].update(rest_strat[opp])
    strat[opp].update({v: s for v, s in sub_strat[opp].items() if v in sub_win[opp]})
    strat[opp].update(back_strat)
    return win, strat


def realizable(aut) -> bool:
    arena = build_arena(aut)
    return arena.initial in zielonka(arena).win_ctrl
