// Profiles and exports: save/load named selection sets, download the three
// artifact bundles for the current selections.

import { ServiceError, type StoredProfile } from '../api.js';
import type { Controller, Store } from '../state.js';

const EXPORT_KINDS = ['process-doc', 'doc-templates', 'project-plan'];

export function triggerDownload(filename: string, bytes: Uint8Array): void {
  const blob = new Blob([bytes as BlobPart], { type: 'application/zip' });
  const url = URL.createObjectURL(blob);
  const anchor = document.createElement('a');
  anchor.href = url;
  anchor.download = filename;
  document.body.appendChild(anchor);
  anchor.click();
  anchor.remove();
  URL.revokeObjectURL(url);
}

export function renderExports(
  root: HTMLElement,
  store: Store,
  controller: Controller,
  download: (filename: string, bytes: Uint8Array) => void = triggerDownload,
): void {
  const section = document.createElement('section');
  section.className = 'exports';
  root.appendChild(section);

  let profiles: StoredProfile[] = [];
  let status = '';

  function setStatus(message: string): void {
    status = message;
    sync();
  }

  async function refreshProfiles(): Promise<void> {
    try {
      profiles = await controller.client.listProfiles();
    } catch {
      profiles = [];
    }
    sync();
  }

  function sync(): void {
    section.innerHTML = '';

    const heading = document.createElement('h2');
    heading.textContent = 'Exports and profiles';
    section.appendChild(heading);

    const exportRow = document.createElement('div');
    exportRow.className = 'export-row';
    for (const kind of EXPORT_KINDS) {
      const button = document.createElement('button');
      button.textContent = kind;
      button.dataset.kind = kind;
      button.addEventListener('click', () => {
        void (async () => {
          setStatus(`exporting ${kind}...`);
          try {
            const bundle = await controller.client.downloadExport(kind, controller.scope());
            download(bundle.filename, bundle.bytes);
            setStatus(`downloaded ${bundle.filename}`);
          } catch (error) {
            setStatus(error instanceof ServiceError ? error.message : String(error));
          }
        })();
      });
      exportRow.appendChild(button);
    }
    section.appendChild(exportRow);

    const saveRow = document.createElement('div');
    saveRow.className = 'profile-row';
    const nameInput = document.createElement('input');
    nameInput.placeholder = 'profile name';
    nameInput.className = 'profile-name';
    const saveButton = document.createElement('button');
    saveButton.textContent = 'Save profile';
    saveButton.addEventListener('click', () => {
      void (async () => {
        const current = store.get();
        try {
          const saved = await controller.client.saveProfile(
            nameInput.value,
            current.selections,
            current.variant ?? undefined,
          );
          setStatus(`saved profile "${saved.name}"`);
          await refreshProfiles();
        } catch (error) {
          setStatus(error instanceof ServiceError ? error.message : String(error));
        }
      })();
    });
    saveRow.appendChild(nameInput);
    saveRow.appendChild(saveButton);
    section.appendChild(saveRow);

    if (profiles.length > 0) {
      const loadRow = document.createElement('div');
      loadRow.className = 'profile-row';
      const picker = document.createElement('select');
      picker.className = 'profile-picker';
      for (const profile of profiles) {
        const option = document.createElement('option');
        option.value = profile.id;
        option.textContent = `${profile.name} (${profile.variant})`;
        picker.appendChild(option);
      }
      const loadButton = document.createElement('button');
      loadButton.textContent = 'Load profile';
      loadButton.addEventListener('click', () => {
        void (async () => {
          try {
            const profile = await controller.client.loadProfile(picker.value);
            store.set({ selections: { ...profile.selections } });
            await controller.refresh();
            setStatus(`loaded profile "${profile.name}"`);
          } catch (error) {
            setStatus(error instanceof ServiceError ? error.message : String(error));
          }
        })();
      });
      loadRow.appendChild(picker);
      loadRow.appendChild(loadButton);
      section.appendChild(loadRow);
    }

    if (status) {
      const line = document.createElement('p');
      line.className = 'status';
      line.textContent = status;
      section.appendChild(line);
    }
  }

  sync();
  void refreshProfiles();
}
