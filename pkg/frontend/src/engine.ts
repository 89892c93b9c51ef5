/**
 * Child-process plumbing: spawn the engine CLI, validate configs through it,
 * and read its stdout as exact-sized byte slices with backpressure.
 */

import { spawn, type ChildProcessByStdio } from "node:child_process";
import { mkdtemp, rm, writeFile } from "node:fs/promises";
import { tmpdir } from "node:os";
import { join } from "node:path";
import type { Readable, Writable } from "node:stream";

export type EngineConfig = Record<string, unknown>;

/** Engine launch command; override with SARSIM_BIN (space-separated). */
export function engineCommand(): string[] {
  const env = process.env.SARSIM_BIN;
  if (env && env.trim()) {
    return env.trim().split(/\s+/);
  }
  return ["python3", "-m", "sarsim.cli"];
}

export interface TempConfig {
  path: string | null;
  cleanup: () => Promise<void>;
}

export async function writeTempConfig(config: EngineConfig | null): Promise<TempConfig> {
  if (config === null || Object.keys(config).length === 0) {
    return { path: null, cleanup: async () => {} };
  }
  const dir = await mkdtemp(join(tmpdir(), "sarsim-client-"));
  const path = join(dir, "config.json");
  await writeFile(path, JSON.stringify(config));
  return { path, cleanup: () => rm(dir, { recursive: true, force: true }) };
}

export function run(args: string[]): Promise<{ status: number; stderr: string }> {
  const [cmd, ...base] = engineCommand();
  return new Promise((resolve, reject) => {
    const child = spawn(cmd, [...base, ...args], {
      stdio: ["ignore", "ignore", "pipe"],
    });
    let stderr = "";
    child.stderr.setEncoding("utf8");
    child.stderr.on("data", (chunk: string) => (stderr += chunk));
    child.on("error", reject);
    child.on("close", (code) => resolve({ status: code ?? 1, stderr }));
  });
}

/**
 * Reject with the engine's own diagnostics when a config does not validate.
 * A zero-batch generation exercises exactly the CLI's schema path.
 */
export async function validateConfig(config: EngineConfig | null, seed: number | bigint): Promise<void> {
  const temp = await writeTempConfig(config);
  try {
    const args = ["generate", "--count", "0", "--seed", String(seed), "--format", "raw", "--out", "-"];
    if (temp.path) {
      args.push("--config", temp.path);
    }
    const { status, stderr } = await run(args);
    if (status !== 0) {
      throw new Error(stderr.trim() || `engine exited with status ${status}`);
    }
  } finally {
    await temp.cleanup();
  }
}

type Child = ChildProcessByStdio<Writable | null, Readable, Readable>;

/** Pull-based reader over a child's stdout; read(n) resolves with exactly n bytes. */
export class EngineStream {
  private chunks: Buffer[] = [];
  private buffered = 0;
  private ended = false;
  private failure: Error | null = null;
  private wakeup: (() => void) | null = null;
  private stderr = "";
  private exitCode: number | null = null;

  constructor(private child: Child) {
    child.stdout.on("data", (chunk: Buffer) => {
      this.chunks.push(chunk);
      this.buffered += chunk.length;
      this.notify();
    });
    child.stdout.on("end", () => {
      this.ended = true;
      this.notify();
    });
    child.stderr.setEncoding("utf8");
    child.stderr.on("data", (chunk: string) => (this.stderr += chunk));
    child.on("error", (err) => {
      this.failure = err;
      this.notify();
    });
    child.on("close", (code) => {
      this.exitCode = code;
      this.ended = true;
      this.notify();
    });
  }

  private notify(): void {
    if (this.wakeup) {
      const fn = this.wakeup;
      this.wakeup = null;
      fn();
    }
  }

  private take(n: number): Buffer {
    const out = Buffer.allocUnsafe(n);
    let copied = 0;
    while (copied < n) {
      const head = this.chunks[0];
      const want = n - copied;
      if (head.length <= want) {
        head.copy(out, copied);
        copied += head.length;
        this.chunks.shift();
      } else {
        head.copy(out, copied, 0, want);
        this.chunks[0] = head.subarray(want);
        copied += want;
      }
    }
    this.buffered -= n;
    return out;
  }

  /** Exactly n bytes, or null on a clean end-of-stream at a block boundary. */
  async read(n: number): Promise<Buffer | null> {
    for (;;) {
      if (this.failure) {
        throw this.failure;
      }
      if (this.buffered >= n) {
        return this.take(n);
      }
      if (this.ended) {
        if (this.exitCode !== null && this.exitCode !== 0) {
          throw new Error(this.stderr.trim() || `engine exited with status ${this.exitCode}`);
        }
        if (this.buffered === 0) {
          return null;
        }
        throw new Error(`stream truncated: wanted ${n} bytes, ${this.buffered} left`);
      }
      await new Promise<void>((resolve) => (this.wakeup = resolve));
    }
  }

  close(): void {
    this.child.kill("SIGKILL");
  }
}

export function spawnStream(args: string[]): EngineStream {
  const [cmd, ...base] = engineCommand();
  const child = spawn(cmd, [...base, ...args], {
    stdio: ["ignore", "pipe", "pipe"],
  }) as Child;
  return new EngineStream(child);
}
