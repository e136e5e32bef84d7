/** Thin typed client over the story service's JSON API.
 *
 * The transport is injected so tests can run against an in-memory
 * service; the browser build uses the fetch-backed transport below.
 */

import type {
  BriefJson,
  CatalogFunction,
  JobJson,
  ManifestJson,
  PhaseInputJson,
  ServerIssue,
  SessionJson,
} from "./types.js";

export interface TransportResponse {
  status: number;
  body: unknown;
}

export interface ServiceTransport {
  request(method: string, path: string, body?: unknown): Promise<TransportResponse>;
}

/** Raised for non-2xx responses; carries the service's error payload. */
export class ApiError extends Error {
  constructor(
    public readonly status: number,
    message: string,
    public readonly issues: ServerIssue[] = [],
  ) {
    super(message);
  }
}

export class NetworkError extends Error {}

function errorFrom(status: number, body: unknown): ApiError {
  if (typeof body === "object" && body !== null) {
    const record = body as Record<string, unknown>;
    if (Array.isArray(record.errors)) {
      const issues = record.errors as ServerIssue[];
      const message = issues.map((issue) => issue.message).join("; ");
      return new ApiError(status, message || `request failed (${status})`, issues);
    }
    if (typeof record.error === "string") {
      return new ApiError(status, record.error);
    }
  }
  return new ApiError(status, `request failed (${status})`);
}

export class StoryServiceClient {
  constructor(private readonly transport: ServiceTransport) {}

  private async call<T>(method: string, path: string, body?: unknown): Promise<T> {
    const response = await this.transport.request(method, path, body);
    if (response.status >= 200 && response.status < 300) {
      return response.body as T;
    }
    throw errorFrom(response.status, response.body);
  }

  getCatalog(): Promise<{ functions: CatalogFunction[] }> {
    return this.call("GET", "/catalog");
  }

  createSession(): Promise<SessionJson> {
    return this.call("POST", "/sessions");
  }

  submitPhase(sessionId: string, phaseInput: PhaseInputJson): Promise<SessionJson> {
    return this.call("POST", `/sessions/${sessionId}/phases`, phaseInput);
  }

  createJob(payload: {
    session_id?: string;
    brief?: BriefJson;
    overrides?: Record<string, string>;
  }): Promise<JobJson> {
    return this.call("POST", "/jobs", payload);
  }

  getJob(jobId: string): Promise<JobJson> {
    return this.call("GET", `/jobs/${jobId}`);
  }

  getManifest(manifestId: string): Promise<ManifestJson> {
    return this.call("GET", `/artifacts/${manifestId}`);
  }

  /** True when the artifact is fetchable (used to pre-flight tiles). */
  async artifactAvailable(assetId: string): Promise<boolean> {
    try {
      await this.call("GET", `/artifacts/${assetId}`);
      return true;
    } catch (error) {
      if (error instanceof ApiError) return false;
      throw error;
    }
  }

  artifactUrl(assetId: string): string {
    return `/artifacts/${assetId}`;
  }
}

/** Browser transport over fetch. */
export function fetchTransport(baseUrl = ""): ServiceTransport {
  return {
    async request(method, path, body) {
      let response: Response;
      try {
        response = await fetch(baseUrl + path, {
          method,
          headers: body === undefined ? undefined : { "Content-Type": "application/json" },
          body: body === undefined ? undefined : JSON.stringify(body),
        });
      } catch (cause) {
        throw new NetworkError(`network failure calling ${path}: ${cause}`);
      }
      const text = await response.text();
      let parsed: unknown = null;
      if (text) {
        try {
          parsed = JSON.parse(text);
        } catch {
          parsed = text;
        }
      }
      return { status: response.status, body: parsed };
    },
  };
}
