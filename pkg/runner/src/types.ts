export const PROTOCOL_VERSION = 1;

export interface RunnerLimits {
  wall_seconds: number;
  memory_mb: number;
}

export interface RunnerJob {
  protocol: number;
  data: {
    dimensions: Record<string, number>;
    values: Record<string, unknown>;
  };
  variable_snippets: Record<string, string>;
  clause_snippets: Record<string, string>;
  limits: RunnerLimits;
}

export type RunnerStatus = "optimal" | "infeasible" | "unbounded" | "error" | "timeout";

export interface RunnerError {
  entity_id: string;
  message: string;
  detail: string;
}

export interface RunnerResult {
  protocol: number;
  status: RunnerStatus;
  objective: number | null;
  values: Record<string, number> | null;
  error: RunnerError | null;
}

/** Thrown for malformed jobs; maps to a nonzero harness exit. */
export class UnreadableJob extends Error {}

export class DuplicateEntityId extends Error {}

function isStringMap(x: unknown): x is Record<string, string> {
  return (
    typeof x === "object" &&
    x !== null &&
    !Array.isArray(x) &&
    Object.values(x).every((v) => typeof v === "string")
  );
}

export function validateJob(doc: unknown): RunnerJob {
  if (typeof doc !== "object" || doc === null || Array.isArray(doc)) {
    throw new UnreadableJob("job must be a JSON object");
  }
  const job = doc as Record<string, unknown>;
  if (job.protocol !== PROTOCOL_VERSION) {
    throw new UnreadableJob(`unsupported protocol: ${JSON.stringify(job.protocol)}`);
  }
  const data = job.data as Record<string, unknown> | undefined;
  if (
    typeof data !== "object" ||
    data === null ||
    typeof data.dimensions !== "object" ||
    data.dimensions === null ||
    typeof data.values !== "object" ||
    data.values === null
  ) {
    throw new UnreadableJob("job.data needs dimensions and values objects");
  }
  for (const [name, size] of Object.entries(data.dimensions as object)) {
    if (!Number.isInteger(size) || (size as number) < 0) {
      throw new UnreadableJob(`dimension ${name} is not a non-negative integer`);
    }
  }
  if (!isStringMap(job.variable_snippets)) {
    throw new UnreadableJob("variable_snippets must map ids to strings");
  }
  if (!isStringMap(job.clause_snippets)) {
    throw new UnreadableJob("clause_snippets must map ids to strings");
  }
  for (const id of Object.keys(job.variable_snippets)) {
    if (id in job.clause_snippets) {
      throw new DuplicateEntityId(`entity id used twice: ${id}`);
    }
  }
  const limits = job.limits as Record<string, unknown> | undefined;
  const wall = typeof limits?.wall_seconds === "number" ? limits.wall_seconds : 30;
  const memory = typeof limits?.memory_mb === "number" ? limits.memory_mb : 2048;
  if (wall <= 0 || memory <= 0) {
    throw new UnreadableJob("limits must be positive");
  }
  return {
    protocol: PROTOCOL_VERSION,
    data: {
      dimensions: data.dimensions as Record<string, number>,
      values: data.values as Record<string, unknown>,
    },
    variable_snippets: job.variable_snippets,
    clause_snippets: job.clause_snippets,
    limits: { wall_seconds: wall, memory_mb: memory },
  };
}
