// App assembly. The location (route under /api) and the variant pin live in
// the URL hash so back/forward replays navigation; selections stay in the
// store and are re-sent in full with every model fetch.

import { ServiceClient } from './api.js';
import { Controller, createStore, emptyState, type Store } from './state.js';
import { renderBrowser } from './ui/browser.js';
import { renderExports } from './ui/exports.js';
import { renderWizard } from './ui/wizard.js';

function parseHash(hash: string): string {
  return hash.replace(/^#\/?/, '').replace(/\/+$/, '');
}

function renderHeader(root: HTMLElement, store: Store, controller: Controller): void {
  const header = document.createElement('header');
  root.appendChild(header);

  function sync(): void {
    const { variants, variant, version } = store.get();
    header.innerHTML = '';

    const title = document.createElement('h1');
    title.textContent = 'Process assistant';
    header.appendChild(title);

    if (variants.length === 0) return;
    const picker = document.createElement('select');
    picker.className = 'variant-picker';
    for (const info of variants) {
      const latest = document.createElement('option');
      latest.value = `${info.variant}|`;
      latest.textContent = `${info.variant} (latest)`;
      picker.appendChild(latest);
      for (const v of info.versions) {
        const option = document.createElement('option');
        option.value = `${info.variant}|${v}`;
        option.textContent = `${info.variant} ${v}`;
        picker.appendChild(option);
      }
    }
    picker.value = `${variant ?? ''}|${version ?? ''}`;
    picker.addEventListener('change', () => {
      const [v, ver] = picker.value.split('|');
      void controller.setVariant(v || null, ver || null);
    });
    header.appendChild(picker);
  }

  sync();
  store.subscribe(sync);
}

function renderErrorBanner(root: HTMLElement, store: Store): void {
  const banner = document.createElement('div');
  banner.className = 'banner';
  banner.hidden = true;
  root.appendChild(banner);
  store.subscribe((state) => {
    if (state.view.phase === 'error' && state.view.code === 'unreachable') {
      banner.textContent = `Service unreachable: ${state.view.message}`;
      banner.hidden = false;
    } else {
      banner.hidden = true;
    }
  });
}

export async function mountApp(
  root: HTMLElement,
  client: ServiceClient,
  windowLike: Window = window,
): Promise<{ store: Store; controller: Controller }> {
  const store = createStore(emptyState());
  const controller = new Controller(client, store);

  renderHeader(root, store, controller);
  renderErrorBanner(root, store);
  const panels = document.createElement('div');
  panels.className = 'panels';
  root.appendChild(panels);
  renderWizard(panels, store, controller);
  renderBrowser(panels, store, controller);
  renderExports(panels, store, controller);

  windowLike.addEventListener('hashchange', () => {
    const location = parseHash(windowLike.location.hash);
    if (location !== store.get().location) {
      void controller.navigate(location);
    }
  });
  store.subscribe((state) => {
    const wanted = state.location ? `#/${state.location}` : '';
    if (parseHash(windowLike.location.hash) !== state.location) {
      windowLike.location.hash = wanted;
    }
  });

  try {
    await controller.bootstrap();
  } catch (error) {
    store.set({
      view: { phase: 'error', code: 'unreachable', message: String(error) },
    });
    return { store, controller };
  }
  const initial = parseHash(windowLike.location.hash);
  if (initial) await controller.navigate(initial);
  return { store, controller };
}

declare global {
  interface Window {
    PROCLINE_SERVICE?: string;
  }
}

if (typeof document !== 'undefined' && document.getElementById('app')) {
  const base =
    window.PROCLINE_SERVICE ??
    new URLSearchParams(window.location.search).get('service') ??
    '';
  void mountApp(document.getElementById('app') as HTMLElement, new ServiceClient(base));
}
