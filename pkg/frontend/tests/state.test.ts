import { describe, expect, it } from 'vitest';

import { Controller, createStore, emptyState } from '../src/state.js';
import { ServiceClient } from '../src/api.js';
import { FixtureService, settle } from './fixture.js';

function makeApp(service = new FixtureService()) {
  const store = createStore(emptyState());
  const controller = new Controller(new ServiceClient('', service.fetch), store);
  return { service, store, controller };
}

function xmlResponse(body: string): Response {
  return new Response(body, {
    status: 200,
    headers: { 'content-type': 'application/xml; charset=utf-8' },
  });
}

describe('Controller', () => {
  it('bootstraps variants, routes, and characteristics', async () => {
    const { store, controller } = makeApp();
    await controller.bootstrap();
    const state = store.get();
    expect(state.variant).toBe('base');
    expect(state.version).toBeNull();
    expect(state.routes).toHaveLength(11);
    expect(state.characteristics.map((c) => c.key)).toEqual(['projectType']);
    expect(state.view).toEqual({ phase: 'ready', document: null });
  });

  it('sends the full selections map on every model fetch', async () => {
    const seen: string[] = [];
    const fetchFn = async (input: RequestInfo | URL): Promise<Response> => {
      seen.push(String(input));
      return xmlResponse('<response/>');
    };
    const store = createStore(emptyState());
    const controller = new Controller(new ServiceClient('', fetchFn), store);
    store.set({ location: 'discipline/d1' });

    await controller.setSelection('projectType', 'maint');
    await controller.setSelection('teamSize', 'large');
    await controller.setSelection('projectType', 'dev');

    const queries = seen.map((url) => new URL(url, 'http://t').searchParams);
    expect(queries[0]?.get('projectType')).toBe('maint');
    // the second fetch still carries the first selection
    expect(queries[1]?.get('projectType')).toBe('maint');
    expect(queries[1]?.get('teamSize')).toBe('large');
    // overwriting a key keeps the rest of the map intact
    expect(queries[2]?.get('projectType')).toBe('dev');
    expect(queries[2]?.get('teamSize')).toBe('large');
  });

  it('drops a selection when cleared and refetches without it', async () => {
    const { service, store, controller } = makeApp();
    store.set({ location: 'workproduct' });
    await controller.setSelection('projectType', 'maint');
    await controller.setSelection('projectType', null);
    const url = service.lastModelRequest();
    expect(url?.searchParams.has('projectType')).toBe(false);
    const state = store.get();
    expect(state.selections).toEqual({});
  });

  it('lets the latest request win even when responses arrive out of order', async () => {
    const pending: Array<(response: Response) => void> = [];
    const fetchFn = (input: RequestInfo | URL): Promise<Response> =>
      new Promise((resolve) => {
        pending.push(resolve);
      });
    const store = createStore(emptyState());
    const controller = new Controller(new ServiceClient('', fetchFn), store);
    store.set({ location: 'discipline/d1' });

    const first = controller.refresh();
    const second = controller.setSelection('projectType', 'maint');
    expect(pending).toHaveLength(2);

    // newer response lands first, stale one afterwards
    pending[1]!(xmlResponse('<Marker id="new"/>'));
    await settle();
    pending[0]!(xmlResponse('<Marker id="old"/>'));
    await settle();
    await Promise.all([first, second]);

    const view = store.get().view;
    expect(view.phase).toBe('ready');
    if (view.phase === 'ready') {
      expect(view.document?.attributes).toEqual([['id', 'new']]);
    }
    expect(store.get().pending).toBe(false);
  });

  it('keeps the newer view when the stale response is an error', async () => {
    const pending: Array<(response: Response) => void> = [];
    const fetchFn = (input: RequestInfo | URL): Promise<Response> =>
      new Promise((resolve) => {
        pending.push(resolve);
      });
    const store = createStore(emptyState());
    const controller = new Controller(new ServiceClient('', fetchFn), store);
    store.set({ location: 'workproduct/wp1' });

    const first = controller.refresh();
    const second = controller.setSelection('projectType', 'dev');
    pending[1]!(xmlResponse('<WorkProduct id="wp1" name="Project Plan"/>'));
    await settle();
    pending[0]!(
      new Response(JSON.stringify({ code: 'filtered', message: 'gone' }), {
        status: 404,
        headers: { 'content-type': 'application/json' },
      }),
    );
    await settle();
    await Promise.all([first, second]);

    expect(store.get().view.phase).toBe('ready');
  });

  it('maps filtered responses to an error view with the service code', async () => {
    const { store, controller } = makeApp();
    await controller.bootstrap();
    store.set({ selections: { projectType: 'maint' } });
    await controller.navigate('workproduct/wp1');
    const view = store.get().view;
    expect(view).toEqual({
      phase: 'error',
      code: 'filtered',
      message: 'wp1 is not in the tailored process',
    });
  });

  it('flags transport failures as unreachable', async () => {
    const fetchFn = async (): Promise<Response> => {
      throw new TypeError('fetch failed');
    };
    const store = createStore(emptyState());
    const controller = new Controller(new ServiceClient('', fetchFn), store);
    store.set({ location: 'discipline' });
    await controller.refresh();
    const view = store.get().view;
    expect(view.phase).toBe('error');
    if (view.phase === 'error') expect(view.code).toBe('unreachable');
  });

  it('clears the view without fetching when the location is empty', async () => {
    const { service, store, controller } = makeApp();
    await controller.navigate('');
    expect(store.get().view).toEqual({ phase: 'ready', document: null });
    expect(service.requests.filter((r) => r.url.includes('/api/'))).toHaveLength(0);
  });

  it('prefixes model paths once a variant and version are pinned', async () => {
    const { service, store, controller } = makeApp();
    await controller.bootstrap();
    store.set({ location: 'discipline/d1' });
    await controller.setVariant('base', '1.0');
    expect(service.lastModelRequest()?.pathname).toBe('/api/base/1.0/discipline/d1');
    expect(store.get().view.phase).toBe('ready');
  });
});
