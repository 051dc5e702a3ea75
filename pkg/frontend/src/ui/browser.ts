// Model browser: collections, element details, and association views, all
// navigated through hash links so back/forward replays location changes.

import { attribute, type XmlNode } from '../xml.js';
import {
  byIdRoute,
  collectionRoutes,
  nestedRoutesFor,
  segmentFor,
  targetTypeForTag,
  type RouteInfo,
} from '../routes.js';
import type { Controller, Store } from '../state.js';

export function locationHash(location: string): string {
  return `#/${location}`;
}

function link(label: string, location: string): HTMLAnchorElement {
  const anchor = document.createElement('a');
  anchor.href = locationHash(location);
  anchor.textContent = label;
  return anchor;
}

function nodeLabel(node: XmlNode): string {
  return attribute(node, 'name') ?? attribute(node, 'id') ?? node.tag;
}

function nodeLocation(routes: RouteInfo[], node: XmlNode): string | null {
  const targetType = targetTypeForTag(routes, node.tag);
  if (!targetType || !byIdRoute(routes, targetType)) return null;
  const id = attribute(node, 'id');
  if (!id) return null;
  return `${segmentFor(targetType)}/${encodeURIComponent(id)}`;
}

/** An element rendered inside a collection, wrapper, or detail view. */
function renderNodeItem(routes: RouteInfo[], node: XmlNode): HTMLLIElement {
  const item = document.createElement('li');
  const location = nodeLocation(routes, node);
  if (location) {
    item.appendChild(link(nodeLabel(node), location));
  } else {
    item.textContent = nodeLabel(node);
  }
  const id = attribute(node, 'id');
  if (id && nodeLabel(node) !== id) {
    const tagged = document.createElement('code');
    tagged.textContent = ` ${id}`;
    item.appendChild(tagged);
  }
  return item;
}

function renderHome(container: HTMLElement, routes: RouteInfo[]): void {
  const heading = document.createElement('h2');
  heading.textContent = 'Browse the process';
  container.appendChild(heading);
  const list = document.createElement('ul');
  list.className = 'collections';
  for (const route of collectionRoutes(routes)) {
    const item = document.createElement('li');
    item.appendChild(link(route.sourceType, segmentFor(route.sourceType)));
    list.appendChild(item);
  }
  container.appendChild(list);
}

function renderCollection(
  container: HTMLElement,
  routes: RouteInfo[],
  location: string,
  documentNode: XmlNode,
): void {
  const heading = document.createElement('h2');
  heading.textContent = location;
  container.appendChild(heading);
  const list = document.createElement('ul');
  list.className = 'elements';
  for (const child of documentNode.children) {
    const item = document.createElement('li');
    const id = attribute(child, 'id');
    if (id) {
      item.appendChild(link(nodeLabel(child), `${location}/${encodeURIComponent(id)}`));
    } else {
      item.textContent = nodeLabel(child);
    }
    list.appendChild(item);
  }
  if (documentNode.children.length === 0) {
    const empty = document.createElement('p');
    empty.className = 'muted';
    empty.textContent = 'No elements in your tailored process.';
    container.appendChild(empty);
  }
  container.appendChild(list);
}

function renderDetail(
  container: HTMLElement,
  routes: RouteInfo[],
  location: string,
  element: XmlNode,
): void {
  const heading = document.createElement('h2');
  heading.textContent = nodeLabel(element);
  container.appendChild(heading);

  const typeLine = document.createElement('p');
  typeLine.className = 'muted';
  typeLine.textContent = element.tag;
  container.appendChild(typeLine);

  if (element.attributes.length > 0) {
    const table = document.createElement('dl');
    table.className = 'attributes';
    for (const [name, value] of element.attributes) {
      const term = document.createElement('dt');
      term.textContent = name;
      const detail = document.createElement('dd');
      detail.textContent = value;
      table.appendChild(term);
      table.appendChild(detail);
    }
    container.appendChild(table);
  }

  for (const child of element.children) {
    if (child.children.length === 0 && child.text !== null) {
      // protected/private attribute rendered as a child element
      const block = document.createElement('section');
      const title = document.createElement('h3');
      title.textContent = child.tag;
      block.appendChild(title);
      const value = document.createElement('div');
      value.className = 'attribute-value';
      value.textContent = child.text;
      block.appendChild(value);
      container.appendChild(block);
      continue;
    }
    // association wrapper (or an empty bare node)
    const block = document.createElement('section');
    const title = document.createElement('h3');
    title.textContent = child.tag;
    block.appendChild(title);
    const list = document.createElement('ul');
    for (const member of child.children) {
      list.appendChild(renderNodeItem(routes, member));
    }
    if (child.children.length === 0 && attribute(child, 'id') !== null) {
      // multiplicity-1 association: the child itself is the target node
      list.appendChild(renderNodeItem(routes, child));
    }
    block.appendChild(list);
    container.appendChild(block);
  }

  const sourceType = element.tag;
  const outgoing = nestedRoutesFor(routes, sourceType);
  if (outgoing.length > 0) {
    const nav = document.createElement('p');
    nav.className = 'assoc-links';
    nav.append('Navigate: ');
    for (const route of outgoing) {
      const segment = route.path.split('/').pop() as string;
      nav.appendChild(link(segment, `${location}/${segment}`));
      nav.append(' ');
    }
    container.appendChild(nav);
  }
}

function renderAssociation(
  container: HTMLElement,
  routes: RouteInfo[],
  documentNode: XmlNode,
): void {
  const source = documentNode.children[0];
  if (!source) {
    const empty = document.createElement('p');
    empty.className = 'muted';
    empty.textContent = 'Nothing here.';
    container.appendChild(empty);
    return;
  }
  const heading = document.createElement('h2');
  heading.textContent = nodeLabel(source);
  container.appendChild(heading);
  for (const wrapper of source.children) {
    const title = document.createElement('h3');
    title.textContent = wrapper.tag;
    container.appendChild(title);
    const list = document.createElement('ul');
    list.className = 'elements';
    for (const member of wrapper.children) {
      list.appendChild(renderNodeItem(routes, member));
    }
    if (wrapper.children.length === 0 && attribute(wrapper, 'id') !== null) {
      list.appendChild(renderNodeItem(routes, wrapper));
    }
    container.appendChild(list);
  }
}

export function renderBrowser(root: HTMLElement, store: Store, controller: Controller): void {
  const section = document.createElement('section');
  section.className = 'browser';
  root.appendChild(section);

  function sync(): void {
    const { routes, location, view, pending } = store.get();
    section.innerHTML = '';

    const crumbs = document.createElement('nav');
    crumbs.className = 'crumbs';
    crumbs.appendChild(link('home', ''));
    const segments = location ? location.split('/') : [];
    segments.forEach((segment, index) => {
      crumbs.append(' / ');
      crumbs.appendChild(link(segment, segments.slice(0, index + 1).join('/')));
    });
    if (pending) {
      const spinner = document.createElement('span');
      spinner.className = 'pending';
      spinner.textContent = ' loading...';
      crumbs.appendChild(spinner);
    }
    section.appendChild(crumbs);

    if (view.phase === 'error') {
      const notice = document.createElement('p');
      if (view.code === 'filtered') {
        notice.className = 'filtered-notice';
        notice.textContent = 'Not in your tailored process.';
      } else {
        notice.className = 'error-notice';
        notice.textContent = `${view.code}: ${view.message}`;
      }
      section.appendChild(notice);
      return;
    }
    if (view.phase !== 'ready') return;

    const documentNode = view.document;
    if (!location || documentNode === null) {
      renderHome(section, routes);
      return;
    }
    const depth = location.split('/').length;
    if (depth === 1) {
      renderCollection(section, routes, location, documentNode);
    } else if (depth === 2) {
      renderDetail(section, routes, location, documentNode);
    } else {
      renderAssociation(section, routes, documentNode);
    }
  }

  sync();
  store.subscribe(sync);
}
