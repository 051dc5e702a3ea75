// Project characterization: one select per characteristic. Every change
// immediately re-fetches the current view with the full selections map.

import type { Controller, Store } from '../state.js';

export function renderWizard(root: HTMLElement, store: Store, controller: Controller): void {
  const section = document.createElement('section');
  section.className = 'wizard';
  root.appendChild(section);

  function sync(): void {
    const { characteristics, selections } = store.get();
    section.innerHTML = '';

    const heading = document.createElement('h2');
    heading.textContent = 'Project characterization';
    section.appendChild(heading);

    if (characteristics.length === 0) {
      const note = document.createElement('p');
      note.className = 'muted';
      note.textContent = 'This model declares no tailoring characteristics.';
      section.appendChild(note);
      return;
    }

    for (const characteristic of characteristics) {
      const field = document.createElement('label');
      field.className = 'wizard-field';
      field.textContent = characteristic.label;

      const select = document.createElement('select');
      select.dataset.key = characteristic.key;

      const blank = document.createElement('option');
      blank.value = '';
      blank.textContent = '(no selection)';
      select.appendChild(blank);
      for (const value of characteristic.values) {
        const option = document.createElement('option');
        option.value = value;
        option.textContent = value;
        select.appendChild(option);
      }
      select.value = selections[characteristic.key] ?? '';
      select.addEventListener('change', () => {
        void controller.setSelection(characteristic.key, select.value || null);
      });

      field.appendChild(select);
      section.appendChild(field);
    }
  }

  sync();
  store.subscribe(sync);
}
