#!/usr/bin/env node
import { spawnSync } from "child_process";
import * as fs from "fs";
import * as os from "os";
import * as path from "path";

import { assemble } from "./assemble";
import {
  DuplicateEntityId,
  PROTOCOL_VERSION,
  RunnerJob,
  RunnerResult,
  UnreadableJob,
  validateJob,
} from "./types";

const EXIT_OK = 0;
const EXIT_USAGE = 1;
const EXIT_UNREADABLE = 2;

function readJobText(argv: string[]): string {
  const at = argv.indexOf("--job");
  if (at === -1 || at + 1 >= argv.length) {
    throw new UnreadableJob("usage: runner --job - (job JSON on stdin)");
  }
  const source = argv[at + 1];
  if (source === "-") {
    return fs.readFileSync(0, "utf8");
  }
  return fs.readFileSync(source, "utf8");
}

function emit(result: RunnerResult): void {
  process.stdout.write(JSON.stringify(result) + "\n");
}

/** Run one job to completion; never throws for a well-formed job. */
export function runJob(job: RunnerJob, pythonBin = "python3"): RunnerResult {
  const script = assemble(job);
  const workdir = fs.mkdtempSync(path.join(os.tmpdir(), "lpagent-runner-"));
  const scriptPath = path.join(workdir, "job.py");
  const base: RunnerResult = {
    protocol: PROTOCOL_VERSION,
    status: "error",
    objective: null,
    values: null,
    error: null,
  };
  try {
    fs.writeFileSync(scriptPath, script);
    const proc = spawnSync(pythonBin, [scriptPath], {
      encoding: "utf8",
      timeout: Math.ceil(job.limits.wall_seconds * 1000),
      killSignal: "SIGKILL",
      maxBuffer: 64 * 1024 * 1024,
    });
    if (proc.error && (proc.error as NodeJS.ErrnoException).code === "ETIMEDOUT") {
      return { ...base, status: "timeout" };
    }
    if (proc.error) {
      throw proc.error; // harness failure: python missing, spawn error
    }
    const line = (proc.stdout || "").trim().split("\n").pop() || "";
    let doc: Record<string, unknown>;
    try {
      doc = JSON.parse(line);
    } catch {
      return {
        ...base,
        status: "error",
        error: {
          entity_id: "",
          message: "ScriptCrashed",
          detail: `exit ${proc.status}, signal ${proc.signal}: ${(proc.stderr || "").slice(-1200)}`,
        },
      };
    }
    return {
      ...base,
      status: doc.status as RunnerResult["status"],
      objective: (doc.objective as number | null) ?? null,
      values: (doc.values as Record<string, number> | null) ?? null,
      error: (doc.error as RunnerResult["error"]) ?? null,
    };
  } finally {
    fs.rmSync(workdir, { recursive: true, force: true });
  }
}

export function main(argv: string[]): number {
  let job: RunnerJob;
  try {
    job = validateJob(JSON.parse(readJobText(argv)));
  } catch (err) {
    if (err instanceof UnreadableJob || err instanceof DuplicateEntityId || err instanceof SyntaxError) {
      process.stderr.write(`unreadable job: ${(err as Error).message}\n`);
      return EXIT_UNREADABLE;
    }
    throw err;
  }
  try {
    emit(runJob(job));
    return EXIT_OK;
  } catch (err) {
    process.stderr.write(`internal error: ${(err as Error).message}\n`);
    return EXIT_USAGE;
  }
}

if (require.main === module) {
  process.exit(main(process.argv.slice(2)));
}
