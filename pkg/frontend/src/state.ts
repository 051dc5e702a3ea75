// Application state: one store, subscribers re-render on every change.
// Tailored content is never kept across selection changes; the controller
// re-fetches the current location with the full selections map, and stale
// responses lose to newer ones (latest wins).

import { ServiceClient, ServiceError, type Characteristic, type VariantInfo } from './api.js';
import type { XmlNode } from './xml.js';
import { deriveCharacteristics, deriveRoutes, type RouteInfo } from './routes.js';

export type ViewState =
  | { phase: 'loading' }
  | { phase: 'ready'; document: XmlNode | null }
  | { phase: 'error'; code: string; message: string };

export interface AssistantState {
  variants: VariantInfo[];
  characteristics: Characteristic[];
  routes: RouteInfo[];
  variant: string | null;
  version: string | null;
  selections: Record<string, string>;
  location: string;
  view: ViewState;
  pending: boolean;
  notice: string | null;
}

export type Listener = (state: AssistantState) => void;

export interface Store {
  get(): AssistantState;
  set(patch: Partial<AssistantState>): void;
  subscribe(listener: Listener): () => void;
}

export function createStore(initial: AssistantState): Store {
  let state = initial;
  const listeners = new Set<Listener>();
  return {
    get: () => state,
    set(patch) {
      state = { ...state, ...patch };
      for (const listener of listeners) listener(state);
    },
    subscribe(listener) {
      listeners.add(listener);
      return () => listeners.delete(listener);
    },
  };
}

export function emptyState(): AssistantState {
  return {
    variants: [],
    characteristics: [],
    routes: [],
    variant: null,
    version: null,
    selections: {},
    location: '',
    view: { phase: 'ready', document: null },
    pending: false,
    notice: null,
  };
}

export class Controller {
  private sequence = 0;

  constructor(
    readonly client: ServiceClient,
    readonly store: Store,
  ) {}

  async bootstrap(): Promise<void> {
    const [variants, document] = await Promise.all([
      this.client.variants(),
      this.client.openapiDocument(),
    ]);
    const first = variants[0] ?? null;
    this.store.set({
      variants,
      routes: deriveRoutes(document),
      characteristics: deriveCharacteristics(document),
      variant: first ? first.variant : null,
      version: null,
    });
    await this.refresh();
  }

  scope() {
    const { variant, version, selections } = this.store.get();
    return { variant, version, selections };
  }

  async refresh(): Promise<void> {
    const { location } = this.store.get();
    if (!location) {
      this.store.set({ view: { phase: 'ready', document: null }, pending: false });
      return;
    }
    const mine = ++this.sequence;
    this.store.set({ pending: true, notice: null });
    try {
      const document = await this.client.fetchModel(location, this.scope());
      if (mine !== this.sequence) return;
      this.store.set({ view: { phase: 'ready', document }, pending: false });
    } catch (error) {
      if (mine !== this.sequence) return;
      if (error instanceof ServiceError) {
        this.store.set({
          view: { phase: 'error', code: error.code, message: error.message },
          pending: false,
        });
      } else {
        this.store.set({
          view: { phase: 'error', code: 'unreachable', message: String(error) },
          pending: false,
        });
      }
    }
  }

  async setSelection(key: string, value: string | null): Promise<void> {
    const selections = { ...this.store.get().selections };
    if (value === null || value === '') delete selections[key];
    else selections[key] = value;
    this.store.set({ selections });
    await this.refresh();
  }

  async navigate(location: string): Promise<void> {
    this.store.set({ location });
    await this.refresh();
  }

  async setVariant(variant: string | null, version: string | null): Promise<void> {
    this.store.set({ variant, version });
    await this.refresh();
  }
}
