import { afterEach, describe, expect, it, vi } from 'vitest';
import { AdvisorClient } from '../src/api.js';
import { AdvisorStore, effectiveDescription } from '../src/state.js';
import { deferred, jsonResponse, SAMPLE_RESPONSE } from './fixtures.js';

const BASE = 'http://advisor.test';

function makeStore() {
  const mock = vi.fn();
  vi.stubGlobal('fetch', mock);
  return { store: new AdvisorStore(new AdvisorClient(BASE)), mock };
}

afterEach(() => {
  vi.unstubAllGlobals();
});

describe('effectiveDescription', () => {
  it('passes the full text through unmasked', () => {
    expect(effectiveDescription('First. Second. Third.', false)).toBe(
      'First. Second. Third.',
    );
  });

  it('keeps only the first sentence when masked', () => {
    expect(effectiveDescription('First one. Second one.', true)).toBe('First one.');
  });

  it('falls back to the whole text without a sentence break', () => {
    expect(effectiveDescription('no terminator here', true)).toBe(
      'no terminator here',
    );
  });
});

describe('AdvisorStore.submit', () => {
  it('stores a successful response', async () => {
    const { store, mock } = makeStore();
    mock.mockResolvedValueOnce(jsonResponse(SAMPLE_RESPONSE));
    store.setDescription('a house');
    await store.submit();
    expect(store.getState().response).toEqual(SAMPLE_RESPONSE);
    expect(store.getState().loading).toBe(false);
    expect(store.getState().error).toBeNull();
  });

  it('records an API failure as an error message', async () => {
    const { store, mock } = makeStore();
    mock.mockResolvedValueOnce(jsonResponse({ detail: 'nope' }, 422));
    store.setDescription('a house');
    await store.submit();
    expect(store.getState().response).toBeNull();
    expect(store.getState().error).toBe('nope');
  });

  it('discards a stale response that lands after a newer one', async () => {
    const { store, mock } = makeStore();
    const first = deferred<unknown>();
    const second = deferred<unknown>();
    mock.mockReturnValueOnce(first.promise).mockReturnValueOnce(second.promise);

    store.setDescription('a house');
    const submit1 = store.submit();
    const submit2 = store.submit();

    // newer request answers first
    const fresh = JSON.parse(JSON.stringify(SAMPLE_RESPONSE)) as typeof SAMPLE_RESPONSE;
    fresh.prototype.building_id = 'bldg-fresh';
    second.resolve(jsonResponse(fresh));
    await submit2;
    expect(store.getState().response?.prototype.building_id).toBe('bldg-fresh');

    // the old answer arrives late and must not overwrite
    const stale = JSON.parse(JSON.stringify(SAMPLE_RESPONSE)) as typeof SAMPLE_RESPONSE;
    stale.prototype.building_id = 'bldg-stale';
    first.resolve(jsonResponse(stale));
    await submit1;
    expect(store.getState().response?.prototype.building_id).toBe('bldg-fresh');
  });

  it('discards a stale failure the same way', async () => {
    const { store, mock } = makeStore();
    const first = deferred<unknown>();
    mock
      .mockReturnValueOnce(first.promise)
      .mockResolvedValueOnce(jsonResponse(SAMPLE_RESPONSE));

    store.setDescription('a house');
    const submit1 = store.submit();
    await store.submit();
    first.reject(new Error('network down'));
    await submit1;
    expect(store.getState().error).toBeNull();
    expect(store.getState().response).toEqual(SAMPLE_RESPONSE);
  });

  it('sends the trimmed description when masked', async () => {
    const { store, mock } = makeStore();
    mock.mockResolvedValue(jsonResponse(SAMPLE_RESPONSE));
    store.setDescription('A 1970s detached house. It has single-pane windows.');
    await store.submit();
    store.setMasked(true);
    await store.idle();
    const bodies = mock.mock.calls.map(
      (call) => JSON.parse((call[1] as RequestInit).body as string) as { description: string },
    );
    expect(bodies[0]?.description).toBe(
      'A 1970s detached house. It has single-pane windows.',
    );
    expect(bodies[1]?.description).toBe('A 1970s detached house.');
  });

  it('omits overrides until they are set, passes them through verbatim after', async () => {
    const { store, mock } = makeStore();
    mock.mockResolvedValue(jsonResponse(SAMPLE_RESPONSE));
    store.setDescription('a house');
    await store.submit();
    store.setOverrides({ discount_rate: 0.07, utility_rates: { propane: 0.11 } });
    await store.submit();
    const bodies = mock.mock.calls.map(
      (call) => JSON.parse((call[1] as RequestInit).body as string) as Record<string, unknown>,
    );
    expect(bodies[0]).not.toHaveProperty('overrides');
    expect(bodies[1]?.['overrides']).toEqual({
      discount_rate: 0.07,
      utility_rates: { propane: 0.11 },
    });
  });
});

describe('toggle re-query behavior', () => {
  it('objective change triggers exactly one request', async () => {
    const { store, mock } = makeStore();
    mock.mockResolvedValue(jsonResponse(SAMPLE_RESPONSE));
    store.setDescription('a house');
    await store.submit();
    expect(mock).toHaveBeenCalledTimes(1);
    store.setObjective('min_dpy');
    await store.idle();
    expect(mock).toHaveBeenCalledTimes(2);
  });

  it('setting the same objective again does not re-query', async () => {
    const { store, mock } = makeStore();
    mock.mockResolvedValue(jsonResponse(SAMPLE_RESPONSE));
    store.setDescription('a house');
    await store.submit();
    store.setObjective('max_co2_reduction'); // already active
    await store.idle();
    expect(mock).toHaveBeenCalledTimes(1);
  });

  it('mask change triggers exactly one request', async () => {
    const { store, mock } = makeStore();
    mock.mockResolvedValue(jsonResponse(SAMPLE_RESPONSE));
    store.setDescription('a house');
    await store.submit();
    store.setMasked(true);
    await store.idle();
    expect(mock).toHaveBeenCalledTimes(2);
    store.setMasked(false);
    await store.idle();
    expect(mock).toHaveBeenCalledTimes(3);
  });

  it('editing the description alone never queries', async () => {
    const { store, mock } = makeStore();
    store.setDescription('a house');
    store.setDescription('a bigger house');
    expect(mock).not.toHaveBeenCalled();
  });

  it('toggles with an empty description stay quiet', async () => {
    const { store, mock } = makeStore();
    store.setObjective('min_dpy');
    store.setMasked(true);
    await store.idle();
    expect(mock).not.toHaveBeenCalled();
  });
});
