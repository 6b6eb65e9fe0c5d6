/**
 * History panel: the commit list with the head marker, editable messages,
 * confirm checkboxes, and per-commit checkout.
 */

import { Controller } from '../controller.js';
import { formatTimestamp } from '../format.js';
import type { AppState } from '../state.js';

export class HistoryPanel {
  constructor(
    private readonly root: HTMLElement,
    private readonly controller: Controller,
  ) {
    root.innerHTML = '<h2>History</h2><div class="commits"></div>';
  }

  render(state: AppState): void {
    const body = this.root.querySelector('.commits')!;
    body.innerHTML = '';
    const history = state.history;
    if (!history || history.commits.length === 0) {
      body.innerHTML = '<p class="hint">no edits yet</p>';
      return;
    }
    const rootCard = this.rootCard(history.head === 'ROOT', state.busy);
    for (let i = history.commits.length - 1; i >= 0; i -= 1) {
      const commit = history.commits[i];
      body.appendChild(this.commitCard(state, commit.id === history.head, i));
    }
    body.appendChild(rootCard);
  }

  private rootCard(isHead: boolean, busy: boolean): HTMLElement {
    const card = document.createElement('div');
    card.className = `commit-card${isHead ? ' head' : ''}`;
    const label = document.createElement('span');
    label.className = 'commit-id';
    label.textContent = 'ROOT';
    card.appendChild(label);
    const checkout = document.createElement('button');
    checkout.textContent = 'checkout';
    checkout.disabled = busy || isHead;
    checkout.addEventListener('click', () => void this.controller.checkout('ROOT'));
    card.appendChild(checkout);
    return card;
  }

  private commitCard(state: AppState, isHead: boolean, index: number): HTMLElement {
    const commit = state.history!.commits[index];
    const card = document.createElement('div');
    card.className = `commit-card${isHead ? ' head' : ''}${commit.applied ? '' : ' undone'}`;

    const top = document.createElement('div');
    top.className = 'commit-top';
    const id = document.createElement('span');
    id.className = 'commit-id';
    id.textContent = `${commit.id}${isHead ? ' (head)' : ''}`;
    const time = document.createElement('span');
    time.className = 'commit-time';
    time.textContent = formatTimestamp(commit.timestamp);
    top.appendChild(id);
    top.appendChild(time);
    card.appendChild(top);

    const message = document.createElement('input');
    message.className = 'commit-message';
    message.value = commit.message;
    message.addEventListener('change', () => {
      void this.controller.setMessage(commit.id, message.value);
    });
    card.appendChild(message);

    const actions = document.createElement('div');
    actions.className = 'commit-actions';
    const confirm = document.createElement('label');
    const checkbox = document.createElement('input');
    checkbox.type = 'checkbox';
    checkbox.checked = commit.confirmed;
    checkbox.disabled = state.busy;
    checkbox.addEventListener('change', () => {
      void this.controller.confirm(commit.id, checkbox.checked);
    });
    confirm.appendChild(checkbox);
    confirm.appendChild(document.createTextNode(' confirmed'));
    const checkout = document.createElement('button');
    checkout.textContent = 'checkout';
    checkout.disabled = state.busy || isHead;
    checkout.addEventListener('click', () => void this.controller.checkout(commit.id));
    actions.appendChild(confirm);
    actions.appendChild(checkout);
    card.appendChild(actions);
    return card;
  }
}
