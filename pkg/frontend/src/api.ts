import { z } from 'zod';
import {
  healthResponseSchema,
  measuresResponseSchema,
  recommendResponseSchema,
  type HealthResponse,
  type MeasuresResponse,
  type RecommendRequest,
  type RecommendResponse,
} from './schema.js';

export class ApiError extends Error {
  constructor(
    message: string,
    readonly status: number | null = null,
  ) {
    super(message);
    this.name = 'ApiError';
  }
}

async function detailFrom(response: Response): Promise<string> {
  try {
    const body: unknown = await response.json();
    if (body && typeof body === 'object' && 'detail' in body) {
      return String((body as { detail: unknown }).detail);
    }
  } catch {
    // non-JSON error body; fall through to the status line
  }
  return `request failed with status ${response.status}`;
}

export class AdvisorClient {
  constructor(private readonly baseUrl: string) {
    this.baseUrl = baseUrl.replace(/\/+$/, '');
  }

  private async get<T>(path: string, schema: z.ZodType<T>): Promise<T> {
    const response = await fetch(`${this.baseUrl}${path}`);
    if (!response.ok) {
      throw new ApiError(await detailFrom(response), response.status);
    }
    return this.parse(schema, await response.json());
  }

  private parse<T>(schema: z.ZodType<T>, body: unknown): T {
    const result = schema.safeParse(body);
    if (!result.success) {
      throw new ApiError(`response failed validation: ${result.error.message}`);
    }
    return result.data;
  }

  health(): Promise<HealthResponse> {
    return this.get('/health', healthResponseSchema);
  }

  measures(): Promise<MeasuresResponse> {
    return this.get('/measures', measuresResponseSchema);
  }

  async recommend(request: RecommendRequest): Promise<RecommendResponse> {
    const response = await fetch(`${this.baseUrl}/recommend`, {
      method: 'POST',
      headers: { 'Content-Type': 'application/json' },
      body: JSON.stringify(request),
    });
    if (!response.ok) {
      throw new ApiError(await detailFrom(response), response.status);
    }
    return this.parse(recommendResponseSchema, await response.json());
  }
}
