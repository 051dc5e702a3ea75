// Navigation structure derived from the service's OpenAPI document. The UI
// never hard-codes type names; everything comes from the route metadata the
// generator embeds as vendor extensions.

import type { Characteristic } from './api.js';

export type RouteKind = 'collection' | 'by-id' | 'nested';

export interface RouteInfo {
  kind: RouteKind;
  path: string;
  sourceType: string;
  targetType: string | null;
  association: string | null;
}

export function deriveRoutes(document: any): RouteInfo[] {
  const routes: RouteInfo[] = [];
  for (const [path, operations] of Object.entries<any>(document.paths ?? {})) {
    const get = operations.get;
    if (!get || !get['x-route-kind']) continue;
    routes.push({
      kind: get['x-route-kind'],
      path,
      sourceType: get['x-source-type'],
      targetType: get['x-target-type'] ?? null,
      association: get['x-association'] ?? null,
    });
  }
  return routes;
}

export function deriveCharacteristics(document: any): Characteristic[] {
  const parameters = document.components?.parameters ?? {};
  const characteristics: Characteristic[] = [];
  for (const [key, parameter] of Object.entries<any>(parameters)) {
    characteristics.push({
      key,
      label: parameter.description ?? key,
      values: parameter.schema?.enum ?? [],
    });
  }
  return characteristics;
}

export function collectionRoutes(routes: RouteInfo[]): RouteInfo[] {
  return routes.filter((r) => r.kind === 'collection');
}

export function byIdRoute(routes: RouteInfo[], typeName: string): RouteInfo | null {
  return routes.find((r) => r.kind === 'by-id' && r.sourceType === typeName) ?? null;
}

export function nestedRoutesFor(routes: RouteInfo[], typeName: string): RouteInfo[] {
  return routes.filter((r) => r.kind === 'nested' && r.sourceType === typeName);
}

/** Resolve an embedded node tag (association name or target type) to the
 * association's target type, so views can link into by-id routes. */
export function targetTypeForTag(routes: RouteInfo[], tag: string): string | null {
  for (const route of routes) {
    if (route.kind === 'nested' && (route.association === tag || route.targetType === tag)) {
      return route.targetType;
    }
  }
  for (const route of routes) {
    if (route.kind === 'by-id' && route.sourceType === tag) return tag;
  }
  return null;
}

/** Collection segment of a type, e.g. WorkProduct -> workproduct. */
export function segmentFor(typeName: string): string {
  return typeName.toLowerCase();
}
