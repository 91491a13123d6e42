"""Built-in games: the seven-state illustration game and parametric
blocks-world generators for the arch and line tasks.

Both generators model the human as faster than the robot: a robot placement
that would finish the task is committed first and the human may react before
it lands.  An intervention that breaks the placement's support aborts it,
wasting the energy already spent.  Building at the far site is a single
committing action the human cannot influence.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .game import Edge, GameGraph

ARCH_FORMULA = "F(g_top & b_s1 & b_s2) & G(!(b_s1 & b_s2) -> !g_top)"
LINE_FORMULA = "F(pink_top & blue_mid & green_bot)"
ARCH_PROPS = ("b_s1", "b_s2", "g_top")
LINE_PROPS = ("blue_mid", "green_bot", "pink_top")


class CapacityError(ValueError):
    pass


@dataclass
class ScenarioParams:
    preset: str = "arch"
    blocks: int = 4
    locations: int = 4
    robot_region_cost: int = 3
    human_region_cost: int = 1

    def validate(self):
        if self.preset not in ("arch", "line"):
            raise ValueError(f"unknown preset '{self.preset}'")
        if self.blocks < 4:
            raise ValueError("presets need at least their 4 base blocks")
        if self.locations < self.blocks:
            raise CapacityError(
                f"scenario capacity: {self.locations} locations per region "
                f"< {self.blocks} blocks"
            )
        if self.robot_region_cost < 1 or self.human_region_cost < 1:
            raise ValueError("region action costs must be at least 1")


@dataclass
class Scenario:
    """A generated game plus everything a client needs to present it."""

    name: str
    description: str
    game: GameGraph
    formula: str
    default_budget: int
    board: dict = field(default_factory=dict)      # static geometry for the UI
    placements: dict = field(default_factory=dict)  # state id -> {block: slot}


def generate_scenario(params: ScenarioParams):
    """Spec-level entry point: (game graph, task formula text)."""
    scenario = make_scenario(params)
    return scenario.game, scenario.formula


def make_scenario(params: ScenarioParams) -> Scenario:
    params.validate()
    if params.preset == "arch":
        return _arch_scenario(params)
    return _line_scenario(params)


def preset_scenario(name: str, **overrides) -> Scenario:
    if name == "toy":
        return toy_scenario()
    return make_scenario(ScenarioParams(preset=name, **overrides))


PRESET_NAMES = ("toy", "arch", "line")


# ---------------------------------------------------------------------------
# Toy game: the two-branch arch illustration
# ---------------------------------------------------------------------------

def toy_game() -> GameGraph:
    """Seven-state arch game: place the green block near the human (cheap but
    interruptible) or away (expensive but safe)."""
    states = {
        "v0": "robot",   # green in gripper, near supports ready
        "v1": "human",   # committed near; human may intervene
        "v2": "human",   # built away; human cannot reach
        "v3": "robot",   # near attempt broken, a support taken
        "v4": "robot",   # arch standing near
        "v5": "human",   # arch rebuilt away after interference
        "v6": "robot",   # idle, task done
    }
    done = ("g_top", "b_s1", "b_s2")
    labels = {
        "v0": ("b_s1", "b_s2"),
        "v1": ("b_s1", "b_s2"),
        "v2": done,
        "v3": ("b_s1",),
        "v4": done,
        "v5": done,
        "v6": done,
    }
    edges = [
        Edge("v0", "a_s1", "v1", 1),
        Edge("v0", "a_s2", "v2", 5),
        Edge("v1", "a_e1", "v3", 0),
        Edge("v1", "a_e2", "v4", 0),
        Edge("v2", "a_e1", "v6", 0),
        Edge("v2", "a_e2", "v6", 0),
        Edge("v3", "a_s2", "v5", 6),
        Edge("v5", "a_e2", "v6", 0),
    ]
    return GameGraph(ARCH_PROPS, states, labels, "v0", edges)


def toy_scenario() -> Scenario:
    return Scenario(
        name="toy",
        description="Two-branch arch illustration: near costs 1 or 7, away 5.",
        game=toy_game(),
        formula=ARCH_FORMULA,
        default_budget=7,
    )


# ---------------------------------------------------------------------------
# Arch construction
# ---------------------------------------------------------------------------

def _arch_scenario(params: ScenarioParams) -> Scenario:
    hc = params.human_region_cost
    rc = params.robot_region_cost
    n_junk = params.blocks - 4
    junk_parks = params.locations - 3  # parks left once g, sA, sB have homes

    # state: (g, s1, s2, k, junk) with g in {home,drop,pend,top_h,top_r},
    # s1/s2 in {sup,home}, k in {site,gone}, junk = tuple of park indices
    init = ("home", "sup", "sup", "site", tuple(range(n_junk)), "r")

    def state_id(st):
        g, s1, s2, k, junk, turn = st
        parts = [f"g={g}", f"s1={s1}", f"s2={s2}", f"k={k}"]
        parts += [f"j{i}=p{pos}" for i, pos in enumerate(junk)]
        return ",".join(parts) + "|" + turn

    def labels_of(st):
        g, s1, s2, _, _, _ = st
        out = set()
        if s1 == "sup":
            out.add("b_s1")
        if s2 == "sup":
            out.add("b_s2")
        if g in ("top_h", "top_r"):
            # landing and the far site both guarantee the supports
            out = {"g_top", "b_s1", "b_s2"}
        return out

    def robot_moves(st):
        g, s1, s2, k, junk, _ = st
        out = []
        if g in ("home", "drop"):
            grip = hc if g == "drop" else 0
            if s1 == "sup" and s2 == "sup":
                out.append(
                    ("place-green", grip + hc, (("g", "pend"),))
                )
            out.append(
                ("build-away", grip + hc + rc, (("g", "top_r"), ("k", "gone")))
            )
        if s1 == "home":
            out.append(("restore-s1", hc, (("s1", "sup"),)))
        if s2 == "home":
            out.append(("restore-s2", hc, (("s2", "sup"),)))
        if not out:
            # task done: the robot can always tidy up in place
            out.append(("tidy", hc, ()))
        return out

    def human_moves(st):
        g, s1, s2, k, junk, _ = st
        out = [("wait", ())]
        if s1 == "sup":
            out.append(("take-s1", (("s1", "home"),)))
        if s2 == "sup":
            out.append(("take-s2", (("s2", "home"),)))
        occupied = set(junk)
        for i, pos in enumerate(junk):
            for park in range(junk_parks):
                if park != pos and park not in occupied:
                    out.append((f"shift-j{i}-p{park}", (("junk", i, park),)))
        return out

    def apply_updates(st, updates, turn):
        g, s1, s2, k, junk, _ = st
        fields = {"g": g, "s1": s1, "s2": s2, "k": k}
        junk = list(junk)
        for upd in updates:
            if upd[0] == "junk":
                junk[upd[1]] = upd[2]
            else:
                fields[upd[0]] = upd[1]
        return (fields["g"], fields["s1"], fields["s2"], fields["k"],
                tuple(junk), turn)

    def resolve_pending(st):
        # the committed green placement lands only if both supports held
        g, s1, s2, k, junk, turn = st
        if g != "pend":
            return st
        landed = "top_h" if (s1 == "sup" and s2 == "sup") else "drop"
        return (landed, s1, s2, k, junk, turn)

    states, labels, edges = {}, {}, []
    placements = {}
    stack = [init]
    seen = {init}
    while stack:
        st = stack.pop()
        sid = state_id(st)
        turn = st[-1]
        states[sid] = "robot" if turn == "r" else "human"
        labels[sid] = labels_of(st)
        placements[sid] = _arch_placements(st)
        if turn == "r":
            for action, cost, updates in robot_moves(st):
                nxt = apply_updates(st, updates, "h")
                edges.append(Edge(sid, action, state_id(nxt), cost))
                if nxt not in seen:
                    seen.add(nxt)
                    stack.append(nxt)
        else:
            for action, updates in human_moves(st):
                nxt = resolve_pending(apply_updates(st, updates, "r"))
                edges.append(Edge(sid, action, state_id(nxt), 0))
                if nxt not in seen:
                    seen.add(nxt)
                    stack.append(nxt)

    game = GameGraph(ARCH_PROPS, states, labels, state_id(init), edges)
    board = {
        "regions": {"human": "left", "robot": "right"},
        "slots": {
            "sup1": {"region": "human", "x": 0, "y": 2},
            "top_h": {"region": "human", "x": 1, "y": 1},
            "sup2": {"region": "human", "x": 2, "y": 2},
            "home": {"region": "human", "x": 0, "y": 0},
            "drop": {"region": "human", "x": 1, "y": 0},
            "pa": {"region": "human", "x": 2, "y": 0},
            "pb": {"region": "human", "x": 3, "y": 0},
            "top_r": {"region": "robot", "x": 1, "y": 1},
        },
        "blocks": {"g": "green", "s1": "pink", "s2": "blue", "k": "gray"},
    }
    for i in range(n_junk):
        board["blocks"][f"j{i}"] = "brown"
    for park in range(junk_parks):
        board["slots"][f"p{park}"] = {"region": "human", "x": 3 + park, "y": 0}
    return Scenario(
        name="arch",
        description=(
            "Build an arch with the green block on top; the far site costs "
            f"{hc + rc} total, helping hands can finish it near for {hc}."
        ),
        game=game,
        formula=ARCH_FORMULA,
        default_budget=10,
        board=board,
        placements=placements,
    )


def _arch_placements(st):
    g, s1, s2, k, junk, _ = st
    out = {}
    out["g"] = {"home": "home", "drop": "drop", "pend": "pending:top_h",
                "top_h": "top_h", "top_r": "top_r"}[g]
    out["s1"] = "sup1" if s1 == "sup" else "pa"
    out["s2"] = "sup2" if s2 == "sup" else "pb"
    if k == "site":
        out["k"] = "top_r"
    for i, pos in enumerate(junk):
        out[f"j{i}"] = f"p{pos}"
    return out


# ---------------------------------------------------------------------------
# Straight line alignment
# ---------------------------------------------------------------------------

def _line_scenario(params: ScenarioParams) -> Scenario:
    hc = params.human_region_cost
    rc = params.robot_region_cost
    n_junk = params.blocks - 4
    junk_parks = params.locations - 3

    # state: (gr, b, p, j, junk, turn); tower slots fill bottom-up and only
    # the line's own blocks count as support.  The green block starts in
    # position near the human; the far site is cluttered with junk.
    init = ("bot_h", "pk", "pk", "bot_r", tuple(range(n_junk)), "r")

    def state_id(st):
        gr, b, p, j, junk, turn = st
        parts = [f"b={b}", f"g={gr}", f"j={j}", f"p={p}"]
        parts += [f"x{i}=p{pos}" for i, pos in enumerate(junk)]
        return ",".join(parts) + "|" + turn

    def labels_of(st):
        gr, b, p, _, _, _ = st
        out = set()
        if gr in ("bot_h", "bot_r"):
            out.add("green_bot")
        if b in ("mid_h", "held", "mid_r"):
            out.add("blue_mid")
        if p in ("top_h", "top_r"):
            out.add("pink_top")
        return out

    def robot_moves(st):
        gr, b, p, j, junk, _ = st
        out = []
        # near placements: committed, land after the human's response; a
        # placement that was interrupted mid-air needs a re-grip next time
        if b == "pk" and gr == "bot_h":
            out.append(("set-blue-mid", hc, (("b", "pend"),)))
        if p in ("pk", "drop") and b in ("mid_h", "held"):
            grip = hc if p == "drop" else 0
            out.append(("set-pink-top", grip + hc, (("p", "pend"),)))
        # far-site work: out of the human's reach, lands immediately
        if j == "bot_r":
            out.append(("clear-far-site", rc, (("j", "pk_r"),)))
        if gr == "bot_h" and j != "bot_r" and b != "held":
            # pulling the green out sets a loosely placed blue aside
            upd = (("gr", "bot_r"),) + ((("b", "pk"),) if b == "mid_h" else ())
            out.append(("haul-green-far", rc, upd))
        if b in ("pk", "mid_h") and gr == "bot_r":
            out.append(("haul-blue-far", rc, (("b", "mid_r"),)))
        if p in ("pk", "drop") and b == "mid_r":
            out.append(("haul-pink-far", rc, (("p", "top_r"),)))
        if not out:
            out.append(("tidy", hc, ()))
        return out

    def human_moves(st):
        gr, b, p, j, junk, _ = st
        out = [("wait", ())]
        # after seeing a knocked-down placement the human may step in and
        # steady the blue block; that is a firm commitment, never snatched
        # back, while the robot's own placement sits loose and can be grabbed
        if b == "pk" and gr == "bot_h" and p == "drop":
            out.append(("hand-blue-mid", (("b", "held"),)))
        if b == "mid_h" and p != "top_h":
            out.append(("grab-blue", (("b", "pk"),)))
        occupied = set(junk)
        for i, pos in enumerate(junk):
            for park in range(junk_parks):
                if park != pos and park not in occupied:
                    out.append((f"shift-x{i}-p{park}", (("junk", i, park),)))
        return out

    def apply_updates(st, updates, turn):
        gr, b, p, j, junk, _ = st
        fields = {"gr": gr, "b": b, "p": p, "j": j}
        junk = list(junk)
        for upd in updates:
            if upd[0] == "junk":
                junk[upd[1]] = upd[2]
            else:
                fields[upd[0]] = upd[1]
        return (fields["gr"], fields["b"], fields["p"], fields["j"],
                tuple(junk), turn)

    def resolve_pending(st):
        gr, b, p, j, junk, turn = st
        if b == "pend":
            b = "mid_h" if gr == "bot_h" else "pk"
        if p == "pend":
            p = "top_h" if b in ("mid_h", "held") else "drop"
        return (gr, b, p, j, junk, turn)

    states, labels, edges = {}, {}, []
    placements = {}
    stack = [init]
    seen = {init}
    while stack:
        st = stack.pop()
        sid = state_id(st)
        turn = st[-1]
        states[sid] = "robot" if turn == "r" else "human"
        labels[sid] = labels_of(st)
        placements[sid] = _line_placements(st)
        if turn == "r":
            for action, cost, updates in robot_moves(st):
                nxt = apply_updates(st, updates, "h")
                edges.append(Edge(sid, action, state_id(nxt), cost))
                if nxt not in seen:
                    seen.add(nxt)
                    stack.append(nxt)
        else:
            for action, updates in human_moves(st):
                nxt = resolve_pending(apply_updates(st, updates, "r"))
                edges.append(Edge(sid, action, state_id(nxt), 0))
                if nxt not in seen:
                    seen.add(nxt)
                    stack.append(nxt)

    game = GameGraph(LINE_PROPS, states, labels, state_id(init), edges)
    board = {
        "regions": {"human": "left", "robot": "right"},
        "slots": {
            "top_h": {"region": "human", "x": 0, "y": 0},
            "mid_h": {"region": "human", "x": 0, "y": 1},
            "bot_h": {"region": "human", "x": 0, "y": 2},
            "pk_g": {"region": "human", "x": 2, "y": 2},
            "pk_b": {"region": "human", "x": 2, "y": 1},
            "pk_p": {"region": "human", "x": 2, "y": 0},
            "top_r": {"region": "robot", "x": 0, "y": 0},
            "mid_r": {"region": "robot", "x": 0, "y": 1},
            "bot_r": {"region": "robot", "x": 0, "y": 2},
            "pk_r": {"region": "robot", "x": 2, "y": 1},
        },
        "blocks": {"gr": "green", "b": "blue", "p": "pink", "j": "gray"},
    }
    for i in range(n_junk):
        board["blocks"][f"x{i}"] = "brown"
    for park in range(junk_parks):
        board["slots"][f"p{park}"] = {"region": "human", "x": 3 + park, "y": 2}
    return Scenario(
        name="line",
        description=(
            "Align pink over blue over green; rebuilding at the far site "
            f"costs {4 * rc}, near the human it takes {2 * hc} with help."
        ),
        game=game,
        formula=LINE_FORMULA,
        default_budget=20,
        board=board,
        placements=placements,
    )


def _line_placements(st):
    gr, b, p, j, junk, _ = st
    out = {}
    out["gr"] = {"pk": "pk_g", "bot_h": "bot_h", "bot_r": "bot_r"}[gr]
    out["b"] = {"pk": "pk_b", "pend": "pending:mid_h", "mid_h": "mid_h",
                "held": "mid_h", "mid_r": "mid_r"}[b]
    out["p"] = {"pk": "pk_p", "pend": "pending:top_h", "drop": "drop",
                "top_h": "top_h", "top_r": "top_r"}[p]
    out["j"] = j
    for i, pos in enumerate(junk):
        out[f"x{i}"] = f"p{pos}"
    return out
