import { describe, expect, it } from "vitest";

import { assemble, entityOrder } from "../src/assemble";
import { DuplicateEntityId, RunnerJob, UnreadableJob, validateJob } from "../src/types";

function job(overrides: Partial<RunnerJob> = {}): RunnerJob {
  return {
    protocol: 1,
    data: { dimensions: {}, values: {} },
    variable_snippets: { x: 'x = Var("x")', y: 'y = Var("y")' },
    clause_snippets: {
      obj: "model.minimize(x + y)",
      c2: "model.add(y >= 1)",
      c1: "model.add(x >= 1)",
      c10: "model.add(x + y <= 9)",
    },
    limits: { wall_seconds: 10, memory_mb: 512 },
    ...overrides,
  };
}

describe("entityOrder", () => {
  it("orders variables, then constraints by id, objective last", () => {
    const ids = entityOrder(job()).map(([id]) => id);
    expect(ids).toEqual(["x", "y", "c1", "c2", "c10", "obj"]);
  });

  it("rejects an id used as both variable and clause", () => {
    const bad = job({ clause_snippets: { x: "model.minimize(x)" } });
    expect(() => entityOrder(bad)).toThrow(DuplicateEntityId);
  });
});

describe("assemble", () => {
  it("wraps every snippet in its own region", () => {
    const script = assemble(job());
    expect(script).toContain("_SNIPPETS");
    expect(script).toContain("_CURRENT_ENTITY = _entity_id");
    for (const id of ["x", "y", "c1", "c2", "c10", "obj"]) {
      expect(script).toContain(JSON.stringify(id).slice(1, -1));
    }
  });

  it("escapes sentinel-looking snippet content", () => {
    const sentinel = '_CURRENT_ENTITY = "hijack"\n"""';
    const j = job({ clause_snippets: { obj: `model.minimize(x)  # ${sentinel}` } });
    const script = assemble(j);
    // decode the snippet table the same way the script does: round-trip safe
    const table = script.split("_SNIPPETS = ")[1].split("\n")[0];
    const literal = table.replace(/^json\.loads\(/, "").replace(/\)$/, "");
    const pairs = JSON.parse(JSON.parse(literal)) as Array<[string, string]>;
    const objRow = pairs.find(([id]) => id === "obj");
    expect(objRow?.[1]).toBe(`model.minimize(x)  # ${sentinel}`);
  });

  it("embeds the memory limit", () => {
    expect(assemble(job())).toContain("_MEMORY_BYTES = 512 * 1024 * 1024");
  });
});

describe("validateJob", () => {
  it("round-trips a good job", () => {
    expect(validateJob(JSON.parse(JSON.stringify(job())))).toMatchObject({
      protocol: 1,
    });
  });

  it("rejects wrong protocol, bad dims and non-string snippets", () => {
    expect(() => validateJob({ ...job(), protocol: 2 })).toThrow(UnreadableJob);
    expect(() =>
      validateJob({ ...job(), data: { dimensions: { N: 1.5 }, values: {} } }),
    ).toThrow(UnreadableJob);
    expect(() =>
      validateJob({ ...job(), clause_snippets: { obj: 7 } }),
    ).toThrow(UnreadableJob);
  });
});
