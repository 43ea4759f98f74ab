import type { AdvisorClient } from './api.js';
import type {
  EconOverrides,
  ObjectiveId,
  RecommendResponse,
} from './schema.js';

export interface AppState {
  description: string;
  objective: ObjectiveId;
  masked: boolean;
  overrides: EconOverrides | undefined;
  loading: boolean;
  error: string | null;
  response: RecommendResponse | null;
}

export type Listener = (state: AppState) => void;

/**
 * Keep only the first sentence when the terse toggle is on. Pure text
 * trimming; what the shorter description matches is the service's call.
 */
export function effectiveDescription(description: string, masked: boolean): string {
  if (!masked) return description;
  const match = description.match(/^.*?[.!?](?=\s|$)/s);
  return match ? match[0] : description;
}

export class AdvisorStore {
  private state: AppState = {
    description: '',
    objective: 'max_co2_reduction',
    masked: false,
    overrides: undefined,
    loading: false,
    error: null,
    response: null,
  };

  // every submit takes a ticket; only the newest ticket may write results
  private seq = 0;
  private inflight: Promise<void> = Promise.resolve();
  private listeners: Listener[] = [];

  constructor(private readonly client: AdvisorClient) {}

  getState(): AppState {
    return this.state;
  }

  subscribe(listener: Listener): () => void {
    this.listeners.push(listener);
    return () => {
      this.listeners = this.listeners.filter((l) => l !== listener);
    };
  }

  private set(patch: Partial<AppState>): void {
    this.state = { ...this.state, ...patch };
    for (const listener of this.listeners) listener(this.state);
  }

  /** Resolves once the most recently started request has settled. */
  idle(): Promise<void> {
    return this.inflight;
  }

  setDescription(description: string): void {
    this.set({ description });
  }

  setOverrides(overrides: EconOverrides | undefined): void {
    this.set({ overrides });
  }

  setObjective(objective: ObjectiveId): void {
    if (objective === this.state.objective) return;
    this.set({ objective });
    this.requery();
  }

  setMasked(masked: boolean): void {
    if (masked === this.state.masked) return;
    this.set({ masked });
    this.requery();
  }

  private requery(): void {
    if (this.state.description.trim() !== '') {
      void this.submit();
    }
  }

  submit(): Promise<void> {
    const ticket = ++this.seq;
    this.set({ loading: true, error: null });
    const run = (async () => {
      try {
        const response = await this.client.recommend({
          description: effectiveDescription(
            this.state.description,
            this.state.masked,
          ),
          ...(this.state.overrides ? { overrides: this.state.overrides } : {}),
        });
        if (ticket !== this.seq) return; // a newer request superseded this one
        this.set({ loading: false, response });
      } catch (error) {
        if (ticket !== this.seq) return;
        this.set({
          loading: false,
          error: error instanceof Error ? error.message : String(error),
        });
      }
    })();
    this.inflight = run;
    return run;
  }
}
