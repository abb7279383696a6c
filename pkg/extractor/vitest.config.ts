import { defineConfig } from "vitest/config";

export default defineConfig({
  test: {
    // one kernel instance per worker is plenty; the wasm load dominates
    pool: "threads",
    poolOptions: { threads: { singleThread: true } },
    testTimeout: 120000,
    hookTimeout: 120000,
  },
});
