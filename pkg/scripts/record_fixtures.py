#!/usr/bin/env python3
"""Author the bundled fixture instances and record their LLM transcripts.

Each instance ships with a scripted set of assistant responses. Running the
pipeline in record mode against those responses freezes them into the
content-addressed transcript store, after which the whole suite replays with
no network and no scripting.
"""

from __future__ import annotations

import json
import shutil
import sys
from pathlib import Path

from lpagent.agents import run_pipeline
from lpagent.config import PipelineConfig
from lpagent.llm import ChatResponse, LlmClient, TranscriptStore
from lpagent.preprocess import load_raw_problem

ROOT = Path(__file__).resolve().parents[1]
FIXTURES = ROOT / "fixtures"


def fenced(doc: dict) -> str:
    return "```json\n" + json.dumps(doc, indent=1) + "\n```"


def params(*entries, data=None) -> str:
    doc = {"parameters": [
        {"symbol": s, "shape": shape, "definition": d} for s, shape, d in entries
    ]}
    if data is not None:
        doc["data"] = data
    return fenced(doc)


def segment(background: str, objective: str, *constraints: str) -> str:
    return fenced({
        "background": background,
        "objective": {"description": objective},
        "constraints": [{"description": c} for c in constraints],
    })


def removals(*pairs: tuple[str, str]) -> str:
    return fenced({"removed": [{"id": i, "reason": r} for i, r in pairs]})


def formulation(text: str, related: list[str], new_variables=None) -> str:
    doc = {"formulation": text, "related": related}
    if new_variables:
        doc["new_variables"] = new_variables
    return fenced(doc)


def code(snippet: str) -> str:
    return fenced({"code": snippet})


# Prompt fragments that identify each template. Rules are matched in order;
# the first rule whose fragments all occur in the prompt wins.
P_PARAMS = "list every parameter"
P_SEGMENT = "Segment the problem"
P_FILTER = "Review the candidate constraints"
P_FORMULATE = "Write a mathematical formulation"
P_VARDECL = "declaration\nfor the decision variable"
P_CLAUSE = "code for the\nclause"
P_DEBUG = "below failed. Fix it."


def clause_marker(cid: str) -> str:
    return f"Clause {cid} ("


INSTANCES = {
    "lp1_furniture": {
        "description": (
            "A workshop builds desks and chairs on two shared machines. Each "
            "desk brings a profit of 3 and each chair a profit of 2. A desk "
            "takes 1 hour on the cutter and 3 hours on the finisher; a chair "
            "takes 2 hours on the cutter and 1 hour on the finisher. The "
            "cutter is available for 4 hours and the finisher for 5 hours. "
            "How many desks and chairs should the workshop build to maximize "
            "profit? Fractional units are acceptable.\n"
        ),
        "data": {
            "dimensions": {"Products": 2, "Machines": 2},
            "values": {"Profit": [3, 2], "Hours": [[1, 2], [3, 1]],
                       "Capacity": [4, 5]},
        },
        "optimal": 6.4,
        "rules": [
            ((P_PARAMS,), params(
                ("Profit", ["Products"], "profit earned per unit of each product"),
                ("Hours", ["Machines", "Products"],
                 "machine time one unit of each product needs on each machine"),
                ("Capacity", ["Machines"], "available time on each machine"),
            )),
            ((P_SEGMENT,), segment(
                "A workshop builds two products on shared machines and sells "
                "them at a fixed profit per unit.",
                "Maximize the total profit from the units produced.",
                "Machine time used on each machine must not exceed its capacity.",
                "Production amounts are nonnegative.",
                "No machine may run longer than its available time.",
            )),
            ((P_FILTER,), removals(("k3", "redundant"))),
            ((P_FORMULATE, clause_marker("obj")), formulation(
                "maximize sum over products p of Profit[p] * make[p]",
                ["Profit", "make"],
                [{"symbol": "make", "shape": ["Products"], "domain": "continuous",
                  "definition": "units of each product to build"}],
            )),
            ((P_FORMULATE, clause_marker("c1")), formulation(
                "for every machine m: sum over products p of Hours[m,p] * "
                "make[p] <= Capacity[m]",
                ["Hours", "Capacity", "make"],
            )),
            ((P_FORMULATE, clause_marker("c2")), formulation(
                "make[p] >= 0 for every product p", ["make"],
            )),
            ((P_VARDECL, "Variable make:"), code("var make{p in Products} >= 0;")),
            ((P_CLAUSE, clause_marker("obj")), code(
                "maximize: sum(p in Products)(Profit[p] * make[p]);")),
            ((P_CLAUSE, clause_marker("c1")), code(
                "forall(m in Machines): sum(p in Products)"
                "(Hours[m, p] * make[p]) <= Capacity[m];")),
            ((P_CLAUSE, clause_marker("c2")), code(
                "forall(p in Products): make[p] >= 0;")),
        ],
        "expect": ("solved", 6.4),
    },
    "lp2_diet": {
        "description": (
            "Plan a daily diet from two foods. Food A costs 0.6 per serving "
            "and food B costs 1.0 per serving. A serving of food A provides 2 "
            "units of protein and 1 unit of iron; a serving of food B "
            "provides 1 unit of protein and 3 units of iron. The diet must "
            "supply at least 8 units of protein and at least 10 units of "
            "iron. Minimize the total cost. Servings may be fractional.\n"
        ),
        "data": {
            "dimensions": {"Foods": 2, "Nutrients": 2},
            "values": {"Cost": [0.6, 1.0], "Need": [8, 10],
                       "Content": [[2, 1], [1, 3]]},
        },
        "optimal": 4.08,
        "rules": [
            ((P_PARAMS,), params(
                ("Cost", ["Foods"], "cost per serving of each food"),
                ("Content", ["Nutrients", "Foods"],
                 "amount of each nutrient in one serving of each food"),
                ("Need", ["Nutrients"], "minimum daily amount of each nutrient"),
            )),
            ((P_SEGMENT,), segment(
                "A diet is assembled from servings of two foods, each with a "
                "known cost and nutrient content.",
                "Minimize the total cost of the servings bought.",
                "Each nutrient must reach its minimum daily amount.",
                "Serving counts are nonnegative.",
            )),
            ((P_FILTER,), removals()),
            ((P_FORMULATE, clause_marker("obj")), formulation(
                "minimize sum over foods f of Cost[f] * buy[f]",
                ["Cost", "buy"],
                [{"symbol": "buy", "shape": ["Foods"], "domain": "continuous",
                  "definition": "servings of each food to buy"}],
            )),
            ((P_FORMULATE, clause_marker("c1")), formulation(
                "for every nutrient n: sum over foods f of Content[n,f] * "
                "buy[f] >= Need[n]",
                ["Content", "Need", "buy"],
            )),
            ((P_FORMULATE, clause_marker("c2")), formulation(
                "buy[f] >= 0 for every food f", ["buy"],
            )),
            ((P_VARDECL, "Variable buy:"), code("var buy{f in Foods} >= 0;")),
            ((P_CLAUSE, clause_marker("obj")), code(
                "minimize: sum(f in Foods)(Cost[f] * buy[f]);")),
            ((P_CLAUSE, clause_marker("c1")), code(
                "forall(n in Nutrients): sum(f in Foods)"
                "(Content[n, f] * buy[f]) >= Need[n];")),
            ((P_CLAUSE, clause_marker("c2")), code(
                "forall(f in Foods): buy[f] >= 0;")),
        ],
        "expect": ("solved", 4.08),
    },
    "lp3_blend": {
        "description": (
            "A plant blends three ingredients into a product. Ingredient "
            "gains per unit are 5, 4, and 3. Three resources limit the "
            "blend: resource one offers 5 units and the ingredients use 2, "
            "3, and 1 of it per unit; resource two offers 11 units and the "
            "ingredients use 4, 1, and 2; resource three offers 8 units and "
            "the ingredients use 3, 4, and 2. Choose nonnegative ingredient "
            "amounts that maximize the total gain.\n"
        ),
        "data": {
            "dimensions": {"Ingredients": 3, "Resources": 3},
            "values": {"Gain": [5, 4, 3],
                       "Use": [[2, 3, 1], [4, 1, 2], [3, 4, 2]],
                       "Stock": [5, 11, 8]},
        },
        "optimal": 13.0,
        "rules": [
            ((P_PARAMS,), params(
                ("Gain", ["Ingredients"], "gain per unit of each ingredient"),
                ("Use", ["Resources", "Ingredients"],
                 "amount of each resource one unit of each ingredient consumes"),
                ("Stock", ["Resources"], "available amount of each resource"),
            )),
            ((P_SEGMENT,), segment(
                "A plant blends ingredients under per-resource stock limits.",
                "Maximize the total gain of the blended ingredients.",
                "Resource use must stay within each resource's stock.",
                "Ingredient amounts are nonnegative.",
            )),
            ((P_FILTER,), removals()),
            ((P_FORMULATE, clause_marker("obj")), formulation(
                "maximize sum over ingredients i of Gain[i] * mix[i]",
                ["Gain", "mix"],
                [{"symbol": "mix", "shape": ["Ingredients"],
                  "domain": "continuous",
                  "definition": "units of each ingredient in the blend"}],
            )),
            ((P_FORMULATE, clause_marker("c1")), formulation(
                "for every resource r: sum over ingredients i of Use[r,i] * "
                "mix[i] <= Stock[r]",
                ["Use", "Stock", "mix"],
            )),
            ((P_FORMULATE, clause_marker("c2")), formulation(
                "mix[i] >= 0 for every ingredient i", ["mix"],
            )),
            ((P_VARDECL, "Variable mix:"), code(
                "var mix{i in Ingredients} >= 0;")),
            ((P_CLAUSE, clause_marker("obj")), code(
                "maximize: sum(i in Ingredients)(Gain[i] * mix[i]);")),
            ((P_CLAUSE, clause_marker("c1")), code(
                "forall(r in Resources): sum(i in Ingredients)"
                "(Use[r, i] * mix[i]) <= Stock[r];")),
            ((P_CLAUSE, clause_marker("c2")), code(
                "forall(i in Ingredients): mix[i] >= 0;")),
        ],
        "expect": ("solved", 13.0),
    },
    "milp1_knapsack": {
        "description": (
            "A hiker packs a knapsack from four candidate items worth 10, "
            "13, 7, and 11. The items weigh 5, 6, 4, and 5, and the knapsack "
            "holds at most 10 units of weight. Each item is either packed "
            "whole or left behind. Which items should the hiker pack to "
            "maximize the total value?\n"
        ),
        "data": {
            "dimensions": {"Items": 4},
            "values": {"Value": [10, 13, 7, 11], "Weight": [5, 6, 4, 5],
                       "MaxWeight": 10},
        },
        "optimal": 21.0,
        "rules": [
            ((P_PARAMS,), params(
                ("Value", ["Items"], "value of each candidate item"),
                ("Weight", ["Items"], "weight of each candidate item"),
                ("MaxWeight", [], "weight the knapsack can hold"),
            )),
            ((P_SEGMENT,), segment(
                "A hiker selects whole items for a knapsack with a weight limit.",
                "Maximize the total value of the packed items.",
                "The total weight of the packed items must not exceed the limit.",
                "Every item is packed whole or left behind.",
            )),
            ((P_FILTER,), removals(("k2", "unnecessary"))),
            ((P_FORMULATE, clause_marker("obj")), formulation(
                "maximize sum over items i of Value[i] * take[i]",
                ["Value", "take"],
                [{"symbol": "take", "shape": ["Items"], "domain": "binary",
                  "definition": "whether each item is packed"}],
            )),
            ((P_FORMULATE, clause_marker("c1")), formulation(
                "sum over items i of Weight[i] * take[i] <= MaxWeight",
                ["Weight", "MaxWeight", "take"],
            )),
            ((P_VARDECL, "Variable take:"), code(
                "var take{i in Items}, binary;")),
            ((P_CLAUSE, clause_marker("obj")), code(
                "maximize: sum(i in Items)(Value[i] * take[i]);")),
            ((P_CLAUSE, clause_marker("c1")), code(
                "sum(i in Items)(Weight[i] * take[i]) <= MaxWeight;")),
        ],
        "expect": ("solved", 21.0),
    },
    "milp2_production": {
        "description": (
            "A shop makes two gadgets in whole units, at most 100 of each. "
            "Gadget one earns 4 per unit and gadget two earns 3. Gadget one "
            "needs 2 machine hours and 1 labor hour per unit; gadget two "
            "needs 1 machine hour and 3 labor hours. The shop has 10 machine "
            "hours and 15 labor hours. How many of each gadget should it "
            "make to maximize earnings?\n"
        ),
        "data": {
            "dimensions": {"Products": 2},
            "values": {"Gain": [4, 3], "Machine": [2, 1], "Labor": [1, 3],
                       "MachineCap": 10, "LaborCap": 15},
        },
        "optimal": 24.0,
        "rules": [
            ((P_PARAMS,), params(
                ("Gain", ["Products"], "earnings per unit of each gadget"),
                ("Machine", ["Products"],
                 "machine hours one unit of each gadget needs"),
                ("Labor", ["Products"],
                 "labor hours one unit of each gadget needs"),
                ("MachineCap", [], "machine hours available"),
                ("LaborCap", [], "labor hours available"),
            )),
            ((P_SEGMENT,), segment(
                "A shop makes whole units of two gadgets under machine and "
                "labor hour limits.",
                "Maximize the total earnings from the gadgets made.",
                "Machine hours used must not exceed the machine hours available.",
                "Labor hours used must not exceed the labor hours available.",
            )),
            ((P_FILTER,), removals()),
            ((P_FORMULATE, clause_marker("obj")), formulation(
                "maximize sum over products p of Gain[p] * units[p]",
                ["Gain", "units"],
                [{"symbol": "units", "shape": ["Products"], "domain": "integer",
                  "definition": "whole units of each gadget to make"}],
            )),
            ((P_FORMULATE, clause_marker("c1")), formulation(
                "sum over products p of Machine[p] * units[p] <= MachineCap",
                ["Machine", "MachineCap", "units"],
            )),
            ((P_FORMULATE, clause_marker("c2")), formulation(
                "sum over products p of Labor[p] * units[p] <= LaborCap",
                ["Labor", "LaborCap", "units"],
            )),
            ((P_VARDECL, "Variable units:"), code(
                "var units{p in Products} >= 0 <= 100, integer;")),
            ((P_CLAUSE, clause_marker("obj")), code(
                "maximize: sum(p in Products)(Gain[p] * units[p]);")),
            # first attempt references a symbol that does not exist; the
            # evaluator attributes the failure to c1 and the debugging
            # response below repairs it
            ((P_CLAUSE, clause_marker("c1")), code(
                "sum(p in Products)(Machine[p] * units[p]) <= MachineCapacity;")),
            ((P_CLAUSE, clause_marker("c2")), code(
                "sum(p in Products)(Labor[p] * units[p]) <= LaborCap;")),
            ((P_DEBUG, clause_marker("c1")), code(
                "sum(p in Products)(Machine[p] * units[p]) <= MachineCap;")),
        ],
        "expect": ("solved", 24.0),
    },
    "fail1_postings": {
        "description": (
            "A courier assigns parcels to two delivery routes in whole "
            "numbers, at most 10 parcels per route. Route one earns 5 per "
            "parcel and takes 2 units of van space; route two earns 4 per "
            "parcel and takes 3 units. The van has 6 units of space. "
            "Maximize the earnings of one trip.\n"
        ),
        "data": {
            "dimensions": {"Routes": 2},
            "values": {"Reward": [5, 4], "Load": [2, 3], "Space": 6},
        },
        "optimal": 15.0,
        "rules": [
            ((P_PARAMS,), params(
                ("Reward", ["Routes"], "earnings per parcel on each route"),
                ("Load", ["Routes"], "van space one parcel on each route takes"),
                ("Space", [], "van space available"),
            )),
            ((P_SEGMENT,), segment(
                "A courier loads parcels for two routes into one van.",
                "Maximize the earnings of the trip.",
                "Van space used must not exceed the space available.",
            )),
            ((P_FILTER,), removals()),
            ((P_FORMULATE, clause_marker("obj")), formulation(
                "maximize sum over routes r of Reward[r] * pick[r]",
                ["Reward", "pick"],
                [{"symbol": "pick", "shape": ["Routes"], "domain": "integer",
                  "definition": "parcels assigned to each route"}],
            )),
            ((P_FORMULATE, clause_marker("c1")), formulation(
                "sum over routes r of Load[r] * pick[r] <= Space",
                ["Load", "Space", "pick"],
            )),
            ((P_VARDECL, "Variable pick:"), code(
                "var pick{r in Routes} >= 0 <= 10, integer;")),
            ((P_CLAUSE, clause_marker("obj")), code(
                "maximize: sum(r in Routes)(Reward[r] * pick[r]);")),
            # this instance is authored to fail: both the first attempt and
            # every fix reference a symbol that does not exist
            ((P_CLAUSE, clause_marker("c1")), code(
                "sum(r in Routes)(Load[r] * pick[r]) <= Caps;")),
            ((P_DEBUG, clause_marker("c1")), code(
                "sum(r in Routes)(Load[r] * pick[r]) <= Caps;")),
        ],
        "expect": ("budget_exhausted", None),
    },
}


def make_transport(name: str, rules):
    def transport(request):
        prompt = request.messages[-1][1]
        for fragments, response in rules:
            if all(f in prompt for f in fragments):
                return ChatResponse(content=response, usage={})
        raise AssertionError(f"{name}: no scripted response for prompt:\n{prompt}")
    return transport


def write_instance(name: str, spec: dict) -> Path:
    directory = FIXTURES / "instances" / name
    directory.mkdir(parents=True, exist_ok=True)
    (directory / "description.txt").write_text(spec["description"])
    (directory / "data.json").write_text(
        json.dumps(spec["data"], indent=2) + "\n")
    (directory / "optimal_value.txt").write_text(f"{spec['optimal']}\n")
    return directory


def main() -> int:
    transcripts = FIXTURES / "transcripts"
    if transcripts.exists():
        shutil.rmtree(transcripts)
    transcripts.mkdir(parents=True)
    store = TranscriptStore(transcripts)
    config = PipelineConfig(budget=10, mode="record",
                            transcripts_dir=str(transcripts))
    failures = 0
    for name, spec in INSTANCES.items():
        directory = write_instance(name, spec)
        llm = LlmClient(mode="record", store=store,
                        transport=make_transport(name, spec["rules"]),
                        model=config.model)
        raw = load_raw_problem(directory)
        outcome, record = run_pipeline(raw, config, llm)
        want_kind, want_obj = spec["expect"]
        ok = outcome.kind == want_kind and (
            want_obj is None or abs(outcome.objective - want_obj) < 1e-9)
        print(f"{name}: {outcome.kind} objective={outcome.objective} "
              f"calls={record.calls_used} {'OK' if ok else 'MISMATCH'}")
        if not ok:
            failures += 1
    count = len(list(transcripts.glob("*.json")))
    print(f"{count} transcripts recorded in {transcripts}")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
