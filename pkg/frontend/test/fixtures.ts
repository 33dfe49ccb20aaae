import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";

import type {
  CaseListPage,
  CaseReviewView,
  Rubric,
  StatsPayload,
} from "../src/types.js";

const here = dirname(fileURLToPath(import.meta.url));

function load<T>(name: string): T {
  return JSON.parse(
    readFileSync(join(here, "fixtures", name), "utf-8"),
  ) as T;
}

export const caseViewFixture = load<CaseReviewView>("case-view.json");
export const caseListFixture = load<CaseListPage>("case-list.json");
export const rubricFixture = load<Rubric>("rubric.json");
export const statsFixture = load<StatsPayload>("stats.json");
