// Thin fetch client for the review service.

import type {
  AnnotationWire,
  CaseListPage,
  CaseReviewView,
  Rubric,
  StatsPayload,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    public readonly status: number,
    public readonly detail: unknown,
  ) {
    super(`request failed with status ${status}`);
  }
}

async function request<T>(path: string, init?: RequestInit): Promise<T> {
  const response = await fetch(path, {
    headers: { "Content-Type": "application/json" },
    ...init,
  });
  const body = await response.json().catch(() => null);
  if (!response.ok) {
    throw new ApiError(response.status, body ? (body as { detail?: unknown }).detail : null);
  }
  return body as T;
}

export function listCases(
  status: "pending" | "done" | "all",
  page = 1,
  pageSize = 200,
): Promise<CaseListPage> {
  const params = new URLSearchParams({
    status,
    page: String(page),
    page_size: String(pageSize),
  });
  return request(`/api/cases?${params}`);
}

// Case ids contain a literal slash; the server route captures it as a path.
export function getCase(caseId: string): Promise<CaseReviewView> {
  return request(`/api/cases/${caseId}`);
}

export function getStats(): Promise<StatsPayload> {
  return request("/api/stats");
}

export function getRubric(): Promise<Rubric> {
  return request("/api/rubric");
}

export type SubmitResult =
  | { kind: "saved"; version: number }
  | { kind: "conflict"; currentVersion: number }
  | { kind: "invalid"; violations: string[] };

export async function putAnnotation(
  caseId: string,
  annotation: AnnotationWire,
  expectedVersion: number,
): Promise<SubmitResult> {
  try {
    const body = await request<{ version: number }>(
      `/api/cases/${caseId}/annotation`,
      {
        method: "PUT",
        body: JSON.stringify({ annotation, expected_version: expectedVersion }),
      },
    );
    return { kind: "saved", version: body.version };
  } catch (error) {
    if (error instanceof ApiError && error.status === 409) {
      const detail = error.detail as { current_version?: number } | null;
      return { kind: "conflict", currentVersion: detail?.current_version ?? -1 };
    }
    if (error instanceof ApiError && error.status === 422) {
      const detail = error.detail;
      const violations = Array.isArray(detail)
        ? detail.map(String)
        : [String(detail)];
      return { kind: "invalid", violations };
    }
    throw error;
  }
}
